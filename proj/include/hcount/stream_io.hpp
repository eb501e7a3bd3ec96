#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "hcount/sketch.hpp"

namespace hcount {

// Textual stream line "<+|-> id id ...", canonicalized.
struct StreamRecord {
  std::size_t line_number = 0;
  StreamEdge edge;
};

// Skips blank lines and '#' comments. Errors carry the offending line.
std::vector<StreamRecord> parse_stream_records(std::istream& in,
                                               std::size_t max_edge_size = kMaxEdgeSize);
std::vector<StreamEdge> parse_stream(std::istream& in, std::size_t max_edge_size = kMaxEdgeSize);

// As parse_stream; errors are prefixed with the path.
std::vector<StreamEdge> read_stream_file(const std::string& path,
                                         std::size_t max_edge_size = kMaxEdgeSize);

}  // namespace hcount
