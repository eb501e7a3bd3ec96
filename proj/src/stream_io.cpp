#include "hcount/stream_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hcount/error.hpp"

namespace hcount {

std::vector<StreamRecord> parse_stream_records(std::istream& in, std::size_t max_edge_size) {
  std::vector<StreamRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string tok;
    if (!(fields >> tok)) continue;

    int sign = 0;
    if (tok == "+") {
      sign = 1;
    } else if (tok == "-") {
      sign = -1;
    } else {
      throw Error(ErrorCode::ParseError, "expected '+' or '-', got '" + tok + "'", line_no);
    }

    std::vector<VertexId> vertices;
    while (fields >> tok) {
      VertexId v = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec == std::errc::result_out_of_range) {
        throw Error(ErrorCode::VertexIdOutOfRange, "vertex id '" + tok + "' is too large",
                    line_no);
      }
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::ParseError, "bad vertex id '" + tok + "'", line_no);
      }
      vertices.push_back(v);
    }
    if (vertices.empty()) throw Error(ErrorCode::ParseError, "edge has no vertices", line_no);

    try {
      out.push_back({line_no, StreamEdge::make(sign, std::move(vertices), max_edge_size)});
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), line_no);
    }
  }
  return out;
}

std::vector<StreamEdge> parse_stream(std::istream& in, std::size_t max_edge_size) {
  auto records = parse_stream_records(in, max_edge_size);
  std::vector<StreamEdge> edges;
  edges.reserve(records.size());
  for (auto& r : records) edges.push_back(std::move(r.edge));
  return edges;
}

std::vector<StreamEdge> read_stream_file(const std::string& path, std::size_t max_edge_size) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open stream file " + path);
  try {
    return parse_stream(in, max_edge_size);
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

}  // namespace hcount
