#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace khopnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class CountMismatch : public Error {
 public:
  CountMismatch(std::size_t declared, std::size_t found)
      : Error("declared " + std::to_string(declared) + " nodes but found " +
              std::to_string(found)),
        declared_(declared),
        found_(found) {}
  std::size_t declared() const { return declared_; }
  std::size_t found() const { return found_; }

 private:
  std::size_t declared_;
  std::size_t found_;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(int node)
      : Error("unknown node " + std::to_string(node)), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

class UnknownDest : public Error {
 public:
  explicit UnknownDest(int node)
      : Error("unknown destination " + std::to_string(node)), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

class CooldownActive : public Error {
 public:
  explicit CooldownActive(int node)
      : Error("node " + std::to_string(node) + " is in its priority-zero cooldown") {}
};

class PhaseTimeout : public Error {
 public:
  PhaseTimeout(std::string phase, std::vector<int> pending);
  const std::string& phase() const { return phase_; }
  const std::vector<int>& pending() const { return pending_; }

 private:
  std::string phase_;
  std::vector<int> pending_;
};

class NoClusterheads : public Error {
 public:
  NoClusterheads() : Error("snapshot has no cluster heads") {}
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class FileNotFound : public Error {
 public:
  explicit FileNotFound(std::string path)
      : Error("file not found: " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

inline PhaseTimeout::PhaseTimeout(std::string phase, std::vector<int> pending)
    : Error([&] {
        std::string msg = "phase '" + phase + "' timed out; pending nodes:";
        for (int n : pending) msg += " " + std::to_string(n);
        return msg;
      }()),
      phase_(std::move(phase)),
      pending_(std::move(pending)) {}

}  // namespace khopnet
