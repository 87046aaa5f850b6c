#include <fstream>
#include <iostream>

#include "khopnet/error.hpp"
#include "khopnet/experiment.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kSimulation = 4;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw khopnet::FileNotFound(path);
  out << text;
}

int run(int argc, char** argv) {
  const auto opts = khopnet::parse_flags(argc, argv);
  if (opts.help) {
    std::cout << khopnet::usage_text();
    return 0;
  }
  if (opts.figure) {
    const auto reports = khopnet::run_figure(opts);
    const auto plot = khopnet::emit_plot_data(reports, *opts.figure);
    if (opts.output) write_text(*opts.output, plot);
    else std::cout << plot;
    return 0;
  }
  const auto result = khopnet::run_experiment(opts);
  if (opts.trace) write_text(*opts.trace, result.trace_text);
  if (opts.output) {
    write_text(*opts.output, result.dump_text);
    std::cout << result.metrics_line << '\n';
  } else {
    std::cout << result.dump_text;
    std::cerr << result.metrics_line << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const khopnet::UsageError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const khopnet::FileNotFound& e) {
    std::cerr << "khopnet: " << e.what() << '\n';
    return kIo;
  } catch (const khopnet::ParseError& e) {
    std::cerr << "khopnet: " << e.what() << '\n';
    return kIo;
  } catch (const khopnet::CountMismatch& e) {
    std::cerr << "khopnet: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "khopnet: " << e.what() << '\n';
    return kSimulation;
  }
}
