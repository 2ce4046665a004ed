#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lpbias/graph.hpp"

namespace lpbias {

/// Rule combining two node vectors into one edge vector of the same length.
enum class EdgeOperator { Hadamard, NormalizedHadamard, Average, WeightedL1, WeightedL2 };

const char* to_string(EdgeOperator op);
/// Accepts hadamard, nhadamard (normalized-hadamard), average, l1, l2.
EdgeOperator parse_edge_operator(const std::string& text);

/// Dense node-by-dimension matrix indexed by learning-graph node ids.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t nodes, std::size_t dim, std::string method_tag = {})
      : nodes_(nodes), dim_(dim), data_(nodes * dim, 0.0), method_tag_(std::move(method_tag)) {}

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& method_tag() const noexcept { return method_tag_; }
  void set_method_tag(std::string tag) { method_tag_ = std::move(tag); }

  std::span<double> row(NodeId u) { return {data_.data() + static_cast<std::size_t>(u) * dim_, dim_}; }
  std::span<const double> row(NodeId u) const {
    return {data_.data() + static_cast<std::size_t>(u) * dim_, dim_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const EmbeddingMatrix& other) const {
    return nodes_ == other.nodes_ && dim_ == other.dim_ && data_ == other.data_;
  }

 private:
  std::size_t nodes_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
  std::string method_tag_;
};

struct EmbeddingLoadReport {
  std::size_t rows_read = 0;
  std::vector<std::string> unknown_labels;  ///< rows skipped because the graph lacks the label
};

/// Reads the word-vector text format: a `N d` header, then N rows
/// `label v1 ... vd`. Every node of `graph` must be covered.
EmbeddingMatrix load_embeddings(std::istream& in, const Graph& graph, EmbeddingLoadReport* report = nullptr);
EmbeddingMatrix load_embedding_file(const std::string& path, const Graph& graph,
                                    EmbeddingLoadReport* report = nullptr);

/// Writes the same format with 17 significant digits, rows in id order.
void save_embeddings(std::ostream& out, const EmbeddingMatrix& matrix, const Graph& graph);

void edge_vector(const EmbeddingMatrix& matrix, NodeId u, NodeId v, EdgeOperator op, std::span<double> out);
std::vector<double> edge_vector(const EmbeddingMatrix& matrix, NodeId u, NodeId v, EdgeOperator op);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace lpbias
