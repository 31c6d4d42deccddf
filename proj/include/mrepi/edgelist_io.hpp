#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mrepi/multiplex.hpp"

namespace mrepi {

// "multiplex-edgelist v1":
//
//   #multiplex-edgelist v1 n=<N>
//   #<any further comment lines>
//   A <u> <v>
//   B <u> <v>
//
// with u < v. A shared edge appears once as an A line and once as a B line.

/// Writes the format. Each entry of `comments` becomes a `#`-prefixed line
/// directly after the header.
void write_edgelist(std::ostream& out, const MultiplexGraph& g,
                    const std::vector<std::string>& comments = {});
void write_edgelist(const std::filesystem::path& path, const MultiplexGraph& g,
                    const std::vector<std::string>& comments = {});

/// Parses and validates the format (node range, u < v, simplicity). Throws
/// InputError with the offending line number.
MultiplexGraph read_edgelist(std::istream& in);
MultiplexGraph read_edgelist(const std::filesystem::path& path);

}  // namespace mrepi
