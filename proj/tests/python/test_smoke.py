import os
from pathlib import Path

import pytest

import khopnet

DATA = Path(os.environ.get("KHOPNET_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_priority_rows():
    assert khopnet.compute_priority(khopnet.NodeAttributes(0.8, 4, 4, 1, 5)) == pytest.approx(18.4)
    assert khopnet.compute_priority(khopnet.NodeAttributes(0.25, 1, 10, 1, 7)) == pytest.approx(33.75)


def test_simulate_generated_topology():
    spec = khopnet.TopologySpec()
    spec.nodes = 40
    spec.width = spec.height = 1000
    spec.seed = 3
    topo = khopnet.generate_topology(spec)
    cfg = khopnet.SimConfig()
    cfg.k = 2
    result = khopnet.simulate(cfg, topo)
    assert len(result.roles) == 40
    assert khopnet.Role.CLUSTER_HEAD in result.roles
    assert result.packets == sum(l.ucast_msgs_tx + l.bcast_msgs_tx for l in result.ledgers)
    again = khopnet.simulate(cfg, topo)
    assert again.trace_text == result.trace_text
    report = result.report(2)
    assert report.n_clusterheads + report.n_gateways + report.n_ordinary == 40


def test_golden_dump_round_trip():
    text, report = khopnet.run_experiment(str(DATA / "topologies"), 100, 12, 1, degree=True)
    assert text == (DATA / "golden" / "coordS12N100_k1_d.dump").read_text()
    dump = khopnet.parse_dump(text)
    assert dump.tag == "coordS12N100"
    assert sorted(dump.black + dump.grey + dump.white) == list(range(100))
    assert dump.packets == report.packets_total


def test_baselines_and_errors():
    g = khopnet.VisibilityGraph(3)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    assert khopnet.lowest_id_clustering(g).membership == [0, 0, 2]
    with pytest.raises(khopnet.FileNotFound):
        khopnet.run_experiment("/nonexistent", 100, 4, 1)
    with pytest.raises(khopnet.EmptyInput):
        khopnet.emit_plot_data([], "fig4")


def test_config_text_round_trip():
    cfg = khopnet.SimConfig()
    cfg.seed = 17
    back = khopnet.SimConfig.from_text(cfg.to_text())
    assert back.seed == 17
    with pytest.raises(khopnet.ParseError):
        khopnet.SimConfig.from_text("bogus = 1")
