#include "lpbias/embedding.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lpbias/error.hpp"
#include "lpbias/text_format.hpp"

namespace lpbias {

const char* to_string(EdgeOperator op) {
  switch (op) {
    case EdgeOperator::Hadamard: return "hadamard";
    case EdgeOperator::NormalizedHadamard: return "nhadamard";
    case EdgeOperator::Average: return "average";
    case EdgeOperator::WeightedL1: return "l1";
    case EdgeOperator::WeightedL2: return "l2";
  }
  return "?";
}

EdgeOperator parse_edge_operator(const std::string& text) {
  if (text == "hadamard") return EdgeOperator::Hadamard;
  if (text == "nhadamard" || text == "normalized-hadamard") return EdgeOperator::NormalizedHadamard;
  if (text == "average") return EdgeOperator::Average;
  if (text == "l1" || text == "weighted-l1") return EdgeOperator::WeightedL1;
  if (text == "l2" || text == "weighted-l2") return EdgeOperator::WeightedL2;
  throw ConfigError("unknown edge operator '" + text + "'");
}

namespace {

bool parse_token(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

EmbeddingMatrix load_embeddings(std::istream& in, const Graph& graph, EmbeddingLoadReport* report) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw DataError("embedding file is empty");
  std::size_t rows = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> rows >> dim) || (header >> extra) || dim == 0) {
      throw ParseError(line_no, "embedding header must be 'N d' with d > 0");
    }
  }

  EmbeddingMatrix matrix(graph.node_count(), dim);
  std::vector<char> covered(graph.node_count(), 0);
  EmbeddingLoadReport local;
  std::size_t read = 0;
  std::string label;
  std::string token;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (++read > rows) throw ParseError(line_no, "more rows than announced in the header");
    std::istringstream ls(line);
    ls >> label;
    auto id = graph.find(label);
    std::vector<double> values;
    values.reserve(dim);
    while (ls >> token) {
      double x = 0.0;
      if (!parse_token(token, x)) throw ParseError(line_no, "invalid number '" + token + "'");
      if (!std::isfinite(x)) throw ParseError(line_no, "non-finite value for '" + label + "'");
      values.push_back(x);
    }
    if (values.size() != dim) {
      throw ParseError(line_no, "dimension mismatch for '" + label + "': expected " + std::to_string(dim) +
                                    ", found " + std::to_string(values.size()));
    }
    if (!id) {
      local.unknown_labels.push_back(label);
      continue;
    }
    if (covered[*id]) throw ParseError(line_no, "duplicate row for '" + label + "'");
    covered[*id] = 1;
    std::copy(values.begin(), values.end(), matrix.row(*id).begin());
  }
  local.rows_read = read;
  if (read != rows) {
    throw DataError("embedding header announces " + std::to_string(rows) + " rows, found " + std::to_string(read));
  }

  std::size_t missing = 0;
  std::string names;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    if (covered[u]) continue;
    if (missing < 10) names += (missing ? ", " : "") + graph.label(u);
    ++missing;
  }
  if (missing > 0) {
    throw DataError("embedding lacks " + std::to_string(missing) + " learning-graph node(s): " + names +
                    (missing > 10 ? ", ..." : ""));
  }
  if (report) *report = std::move(local);
  return matrix;
}

EmbeddingMatrix load_embedding_file(const std::string& path, const Graph& graph, EmbeddingLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file '" + path + "'");
  auto m = load_embeddings(in, graph, report);
  m.set_method_tag(path);
  return m;
}

void save_embeddings(std::ostream& out, const EmbeddingMatrix& matrix, const Graph& graph) {
  out << matrix.node_count() << ' ' << matrix.dim() << '\n';
  for (NodeId u = 0; u < matrix.node_count(); ++u) {
    out << graph.label(u);
    for (double x : matrix.row(u)) out << ' ' << format_real(x);
    out << '\n';
  }
}

namespace {

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

void edge_vector(const EmbeddingMatrix& matrix, NodeId u, NodeId v, EdgeOperator op, std::span<double> out) {
  if (u >= matrix.node_count() || v >= matrix.node_count()) throw ContractViolation("node outside embedding");
  auto a = matrix.row(u);
  auto b = matrix.row(v);
  if (out.size() != a.size()) throw ContractViolation("edge vector output has wrong dimension");
  const std::size_t d = a.size();
  switch (op) {
    case EdgeOperator::Hadamard:
      for (std::size_t i = 0; i < d; ++i) out[i] = a[i] * b[i];
      break;
    case EdgeOperator::NormalizedHadamard: {
      const double na = l2_norm(a);
      const double nb = l2_norm(b);
      if (na == 0.0 || nb == 0.0) throw DataError("normalized Hadamard of a zero vector");
      const double scale = 1.0 / (na * nb);
      for (std::size_t i = 0; i < d; ++i) out[i] = a[i] * b[i] * scale;
      break;
    }
    case EdgeOperator::Average:
      for (std::size_t i = 0; i < d; ++i) out[i] = 0.5 * (a[i] + b[i]);
      break;
    case EdgeOperator::WeightedL1:
      for (std::size_t i = 0; i < d; ++i) out[i] = std::abs(a[i] - b[i]);
      break;
    case EdgeOperator::WeightedL2:
      for (std::size_t i = 0; i < d; ++i) out[i] = (a[i] - b[i]) * (a[i] - b[i]);
      break;
  }
}

std::vector<double> edge_vector(const EmbeddingMatrix& matrix, NodeId u, NodeId v, EdgeOperator op) {
  std::vector<double> out(matrix.dim());
  edge_vector(matrix, u, v, op, out);
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double denom = l2_norm(a) * l2_norm(b);
  return denom == 0.0 ? 0.0 : dot / denom;
}

}  // namespace lpbias
