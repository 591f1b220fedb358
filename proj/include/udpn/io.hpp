#pragma once

#include "udpn/histograms.hpp"
#include "udpn/linsolve.hpp"
#include "udpn/semantics.hpp"

#include <string>
#include <string_view>

namespace udpn {

struct ParseError : Error {
  ParseError(std::size_t line, std::size_t col, const std::string &msg)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line),
        col(col) {}
  std::size_t line, col;
};

struct ParseOptions {
  /// Accept names starting with "__copy_", "__shadow_" or "_d". Those are
  /// produced by the tools themselves (loop-less nets, padded witnesses).
  bool allow_reserved = false;
};

bool is_reserved_name(std::string_view name);

/// net { places p q; vars x y; transition t { in p: 2x, y; out q: x; } }
Net parse_net(std::string_view text, const ParseOptions &opt = {});
/// marking { p: red 1, green 3/2; q: blue 2; }. With a net, unknown places
/// are rejected.
Marking parse_marking(std::string_view text, const ParseOptions &opt = {},
                      const Net *net = nullptr);
/// run { step 1/2 t { x -> blue; y -> green } }. With a net, every step is
/// checked against it.
Run parse_run(std::string_view text, const ParseOptions &opt = {}, const Net *net = nullptr);
/// histogram { x: red 1/2, blue 1/2; y: green 1; }
Histogram parse_histogram(std::string_view text, const ParseOptions &opt = {});
/// The format written by dump(), plus an optional first line "vars a b c"
/// fixing the variable order.
ImplicationSystem parse_system(std::string_view text);

std::string serialize(const Net &net);
std::string serialize_marking(const Marking &m);
std::string serialize(const Run &run);
std::string serialize(const Histogram &h);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &text);

} // namespace udpn
