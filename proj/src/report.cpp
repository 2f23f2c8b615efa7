#include "modesplit/report.hpp"

#include <cstdio>
#include <stdexcept>
#include <vector>

#include "modesplit/version.hpp"

namespace modesplit {

TreeNode& TreeNode::add(std::string k) {
  children.emplace_back(std::move(k));
  return children.back();
}

TreeNode& TreeNode::add(std::string k, std::string v) {
  children.emplace_back(std::move(k), std::move(v));
  return children.back();
}

namespace {

void write_node(const TreeNode& node, int depth, std::string& out) {
  if (node.key.empty() || node.key.find(':') != std::string::npos ||
      node.key.find('\n') != std::string::npos)
    throw std::logic_error("serialize_tree: invalid key '" + node.key + "'");
  if (node.value.find('\n') != std::string::npos)
    throw std::logic_error("serialize_tree: value contains a newline");
  if (!node.value.empty() && !node.children.empty())
    throw std::logic_error("serialize_tree: node '" + node.key +
                           "' has both a value and children");
  out.append(2 * depth, ' ');
  out += node.key;
  out += ':';
  if (!node.value.empty()) {
    out += ' ';
    out += node.value;
  }
  out += '\n';
  for (const TreeNode& child : node.children) write_node(child, depth + 1, out);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::runtime_error("document line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string serialize_tree(const TreeNode& root) {
  std::string out;
  write_node(root, 0, out);
  return out;
}

TreeNode parse_tree(const std::string& text) {
  TreeNode root;
  std::vector<TreeNode*> stack;  // stack[d] = last node at depth d
  bool have_root = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    if (line.find('\t') != std::string::npos)
      parse_fail(line_no, "tabs are not allowed in indentation");

    const std::size_t spaces = line.find_first_not_of(' ');
    if (spaces % 2 != 0) parse_fail(line_no, "odd indentation");
    const std::size_t depth = spaces / 2;
    if (depth > stack.size())
      parse_fail(line_no, "indentation jumps past the enclosing node");

    const std::size_t colon = line.find(':', spaces);
    if (colon == std::string::npos) parse_fail(line_no, "missing ':' after the key");
    TreeNode node(line.substr(spaces, colon - spaces));
    if (node.key.empty()) parse_fail(line_no, "empty key");
    std::string rest = line.substr(colon + 1);
    if (!rest.empty()) {
      if (rest.front() != ' ') parse_fail(line_no, "expected a space after ':'");
      node.value = rest.substr(1);
      if (node.value.empty()) parse_fail(line_no, "trailing space after ':'");
    }

    if (depth == 0) {
      if (have_root) parse_fail(line_no, "document must have a single top-level node");
      root = std::move(node);
      have_root = true;
      stack.assign(1, &root);
    } else {
      TreeNode* parent = stack[depth - 1];
      if (!parent->value.empty())
        parse_fail(line_no, "leaf node '" + parent->key + "' cannot have children");
      parent->children.push_back(std::move(node));
      stack.resize(depth);
      stack.push_back(&parent->children.back());
    }
  }
  if (!have_root) throw std::runtime_error("document is empty");
  return root;
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string format_complex(cplx value) {
  return format_real(value.real()) + "," + format_real(value.imag());
}

TreeNode RunRecord::document() const {
  TreeNode root("modesplit-report");
  root.add("version", std::string(kVersion));
  root.add("command", command);
  root.add("seed", std::to_string(seed));
  root.add("tolerance", format_real(tolerance));
  TreeNode p = params;
  p.key = "params";
  root.children.push_back(std::move(p));
  TreeNode r = results;
  r.key = "results";
  root.children.push_back(std::move(r));
  return root;
}

std::string RunRecord::tree_text() const { return serialize_tree(document()); }

std::string RunRecord::csv_text() const {
  std::string out;
  for (const auto& row : table) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& cell = row[i];
      if (cell.find(',') != std::string::npos || cell.find('\n') != std::string::npos)
        throw std::logic_error("csv_text: cell contains a separator: '" + cell + "'");
      if (i) out += ',';
      out += cell;
    }
    out += '\n';
  }
  return out;
}

bool RunRecord::operator==(const RunRecord& other) const {
  // The CSV table is a projection of the same results and is not serialized
  // in the tree, so it does not participate in record equality.
  return command == other.command && seed == other.seed &&
         format_real(tolerance) == format_real(other.tolerance) &&
         params == other.params && results == other.results;
}

RunRecord parse_run_record(const std::string& tree_text) {
  const TreeNode root = parse_tree(tree_text);
  if (root.key != "modesplit-report")
    throw std::runtime_error("document: expected a 'modesplit-report' root, got '" +
                             root.key + "'");
  RunRecord record;
  bool saw_command = false, saw_seed = false, saw_tolerance = false;
  for (const TreeNode& child : root.children) {
    if (child.key == "version") {
      // Kept for humans; any version parses.
    } else if (child.key == "command") {
      record.command = child.value;
      saw_command = true;
    } else if (child.key == "seed") {
      record.seed = std::stoull(child.value);
      saw_seed = true;
    } else if (child.key == "tolerance") {
      record.tolerance = std::stod(child.value);
      saw_tolerance = true;
    } else if (child.key == "params") {
      record.params = child;
    } else if (child.key == "results") {
      record.results = child;
    } else {
      throw std::runtime_error("document: unknown section '" + child.key + "'");
    }
  }
  if (!saw_command || !saw_seed || !saw_tolerance)
    throw std::runtime_error("document: missing command, seed or tolerance");
  return record;
}

}  // namespace modesplit
