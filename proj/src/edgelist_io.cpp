#include "mrepi/edgelist_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mrepi/error.hpp"

namespace mrepi {

namespace {

constexpr std::string_view kMagic = "#multiplex-edgelist v1 n=";

std::uint64_t parse_u64(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    throw InputError("line " + std::to_string(line_no) + ": expected a decimal integer, got '" +
                     std::string(token) + "'");
  }
  return value;
}

void write_layer(std::ostream& out, char layer, std::span<const Edge> edges) {
  for (const Edge& e : edges) out << layer << ' ' << e.u << ' ' << e.v << '\n';
}

}  // namespace

void write_edgelist(std::ostream& out, const MultiplexGraph& g,
                    const std::vector<std::string>& comments) {
  out << kMagic << g.size() << '\n';
  for (const auto& c : comments) out << '#' << c << '\n';
  write_layer(out, 'A', g.edges_a());
  write_layer(out, 'B', g.edges_b());
}

void write_edgelist(const std::filesystem::path& path, const MultiplexGraph& g,
                    const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_edgelist(out, g, comments);
  if (!out) throw InputError("write to '" + path.string() + "' failed");
}

MultiplexGraph read_edgelist(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty multiplex-edgelist input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (!line.starts_with(kMagic)) {
    throw InputError("line 1: missing '#multiplex-edgelist v1 n=<N>' header");
  }
  const std::uint64_t n = parse_u64(std::string_view(line).substr(kMagic.size()), 1);

  EdgeList edges_a;
  EdgeList edges_b;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string layer, su, sv, extra;
    if (!(fields >> layer >> su >> sv) || (fields >> extra)) {
      throw InputError("line " + std::to_string(line_no) + ": expected '<layer> <u> <v>'");
    }
    const auto u = parse_u64(su, line_no);
    const auto v = parse_u64(sv, line_no);
    if (u >= v) throw InputError("line " + std::to_string(line_no) + ": requires u < v");
    if (v >= n) {
      throw InputError("line " + std::to_string(line_no) + ": node " + std::to_string(v) +
                       " out of range for n=" + std::to_string(n));
    }
    const Edge e(static_cast<NodeId>(u), static_cast<NodeId>(v));
    if (layer == "A") {
      edges_a.push_back(e);
    } else if (layer == "B") {
      edges_b.push_back(e);
    } else {
      throw InputError("line " + std::to_string(line_no) + ": unknown layer '" + layer + "'");
    }
  }
  return MultiplexGraph(n, std::move(edges_a), std::move(edges_b));
}

MultiplexGraph read_edgelist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_edgelist(in);
}

}  // namespace mrepi
