#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "plap/errors.hpp"
#include "plap/mesh.hpp"

namespace plap {

namespace {

// Next non-blank line with '#' comments stripped; false at end of input.
bool next_record(std::istream& in, std::string& record, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      record = line;
      return true;
    }
  }
  return false;
}

std::size_t read_header(std::istream& in, const char* keyword, std::size_t& line_no) {
  std::string record;
  if (!next_record(in, record, line_no)) {
    throw MeshError(std::string("missing '") + keyword + "' header", line_no + 1);
  }
  std::istringstream fields(record);
  std::string word;
  long long count = -1;
  std::string extra;
  if (!(fields >> word >> count) || word != keyword || count < 0 || (fields >> extra)) {
    throw MeshError(std::string("expected '") + keyword + " <count>', got '" + record + "'", line_no);
  }
  return static_cast<std::size_t>(count);
}

}  // namespace

Mesh2D parse_mesh(const std::string& text) {
  std::istringstream in(text);
  std::size_t line_no = 0;
  std::string record;

  const std::size_t n_nodes = read_header(in, "NODES", line_no);
  std::vector<Point> nodes;
  nodes.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (!next_record(in, record, line_no)) {
      throw MeshError("expected " + std::to_string(n_nodes) + " nodes, found " + std::to_string(i),
                      line_no + 1);
    }
    std::istringstream fields(record);
    Point p;
    std::string extra;
    if (!(fields >> p.x >> p.y) || (fields >> extra)) {
      throw MeshError("malformed node record '" + record + "'", line_no);
    }
    nodes.push_back(p);
  }

  const std::size_t n_elements = read_header(in, "ELEMENTS", line_no);
  std::vector<Triangle> triangles;
  triangles.reserve(n_elements);
  std::vector<std::size_t> element_line;
  for (std::size_t e = 0; e < n_elements; ++e) {
    if (!next_record(in, record, line_no)) {
      throw MeshError("expected " + std::to_string(n_elements) + " elements, found " +
                          std::to_string(e),
                      line_no + 1);
    }
    std::istringstream fields(record);
    long long i = -1, j = -1, k = -1;
    std::string extra;
    if (!(fields >> i >> j >> k) || (fields >> extra)) {
      throw MeshError("malformed element record '" + record + "'", line_no);
    }
    for (long long idx : {i, j, k}) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= n_nodes) {
        throw MeshError("index out of range: " + std::to_string(idx) + " with " +
                            std::to_string(n_nodes) + " nodes",
                        line_no);
      }
    }
    triangles.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                         static_cast<std::size_t>(k)});
    element_line.push_back(line_no);
  }
  if (next_record(in, record, line_no)) {
    throw MeshError("unexpected trailing content '" + record + "'", line_no);
  }

  try {
    return Mesh2D(std::move(nodes), std::move(triangles));
  } catch (const MeshError& err) {
    // Map "triangle <t>" diagnostics back to the file line.
    const std::string what = err.what();
    const std::string tag = "triangle ";
    if (what.rfind(tag, 0) == 0) {
      const std::size_t t = std::stoull(what.substr(tag.size()));
      if (t < element_line.size()) throw MeshError(what, element_line[t]);
    }
    throw;
  }
}

Mesh2D read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mesh(buffer.str());
}

std::string format_mesh(const Mesh2D& mesh) {
  std::string out;
  char buf[96];
  out += "NODES " + std::to_string(mesh.num_nodes()) + "\n";
  for (const auto& p : mesh.nodes()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out += buf;
  }
  out += "ELEMENTS " + std::to_string(mesh.num_triangles()) + "\n";
  for (const auto& t : mesh.triangles()) {
    std::snprintf(buf, sizeof buf, "%zu %zu %zu\n", t[0], t[1], t[2]);
    out += buf;
  }
  return out;
}

void write_mesh(const Mesh2D& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path.string());
  out << format_mesh(mesh);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace plap
