#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modesplit/common.hpp"

namespace modesplit {

// Node of the structured-text output document. A node is either a leaf
// ("key: value") or an internal node ("key:" followed by indented children);
// keys must not contain ':' or newlines, values must not contain newlines.
struct TreeNode {
  std::string key;
  std::string value;
  std::vector<TreeNode> children;

  TreeNode() = default;
  explicit TreeNode(std::string k) : key(std::move(k)) {}
  TreeNode(std::string k, std::string v) : key(std::move(k)), value(std::move(v)) {}

  TreeNode& add(std::string k);
  TreeNode& add(std::string k, std::string v);

  bool operator==(const TreeNode&) const = default;
};

// Two-space indentation per level.
std::string serialize_tree(const TreeNode& root);

// Inverse of serialize_tree for a document with a single top-level node.
// Throws std::runtime_error with a line number on malformed input.
TreeNode parse_tree(const std::string& text);

// Numeric formatting used across all serialized output: 12 significant
// digits, complex values as "re,im".
std::string format_real(double value);
std::string format_complex(cplx value);

// One CLI run: the echoed inputs, the result tree, and a plot-ready table
// (first row is the header; cells must not contain commas or newlines).
// Wall-clock time is deliberately not part of the record: serialized output
// must be byte-identical across runs with equal seeds.
struct RunRecord {
  std::string command;
  std::uint64_t seed = 0;
  double tolerance = kNormTol;
  TreeNode params{"params"};
  TreeNode results{"results"};
  std::vector<std::vector<std::string>> table;

  // Document tree: a single "modesplit-report" root carrying the version,
  // command echo, params and results.
  TreeNode document() const;
  std::string tree_text() const;
  std::string csv_text() const;

  bool operator==(const RunRecord& other) const;
};

// Rebuild a record from its tree serialization (the CSV projection is not
// recoverable and comes back empty).
RunRecord parse_run_record(const std::string& tree_text);

}  // namespace modesplit
