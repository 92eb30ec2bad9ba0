#include "gcnsel/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "gcnsel/errors.hpp"
#include "gcnsel/rng.hpp"

namespace gcnsel {
namespace {

namespace fs = std::filesystem;

// Line reader that skips blank and '#' lines and tracks line numbers.
class TsvReader {
 public:
  explicit TsvReader(const fs::path& path) : path_(path), in_(path) {
    if (!in_) throw DataError("cannot open " + path.string());
  }

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(path_.filename().string() + ":" + std::to_string(line_no_) + ": " + what);
  }

 private:
  fs::path path_;
  std::ifstream in_;
  Index line_no_ = 0;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

DatasetSummary summarize(const DatasetBundle& b) {
  DatasetSummary s;
  s.nodes = b.num_nodes();
  s.edges = b.edge_rows;
  s.undirected_edges = b.graph.edge_count();
  s.components = connected_components(b.graph).num_components;
  s.classes = b.num_classes();
  s.features = b.num_features();
  return s;
}

std::string format_summary(const std::string& name, const DatasetSummary& s) {
  std::ostringstream os;
  os << name << ": #nodes " << s.nodes << "  #edges " << s.edges << " (" << s.undirected_edges
     << " undirected)  #CC " << s.components << "  #classes " << s.classes << "  #features "
     << s.features;
  return os.str();
}

void check_summary(const DatasetSummary& s, const DatasetMeta& expected) {
  auto check = [](const char* field, const std::optional<Index>& want, Index got) {
    if (want && *want != got) {
      throw DataError(std::string("dataset mismatch: ") + field + " expected " +
                      std::to_string(*want) + ", got " + std::to_string(got));
    }
  };
  check("#nodes", expected.nodes, s.nodes);
  check("#edges", expected.edges, s.edges);
  check("#undirected_edges", expected.undirected_edges, s.undirected_edges);
  check("#CC", expected.components, s.components);
  check("#classes", expected.classes, s.classes);
  check("#features", expected.features, s.features);
}

DatasetMeta load_meta(const fs::path& file) {
  DatasetMeta meta;
  TsvReader reader(file);
  std::string line;
  while (reader.next(line)) {
    const auto cols = split(line, '\t');
    if (cols.size() != 2) reader.fail("expected key<TAB>value");
    const std::string_view key = cols[0];
    const std::string_view value = cols[1];
    if (key == "name") {
      meta.name = std::string(value);
      continue;
    }
    if (key == "labels") {
      std::vector<std::string> names;
      for (auto tok : split(value, ',')) names.emplace_back(tok);
      meta.labels = std::move(names);
      continue;
    }
    Index v = 0;
    if (!parse_number(value, v) || v < 0) reader.fail("bad count '" + std::string(value) + "'");
    if (key == "nodes") meta.nodes = v;
    else if (key == "edges") meta.edges = v;
    else if (key == "undirected_edges") meta.undirected_edges = v;
    else if (key == "components") meta.components = v;
    else if (key == "classes") meta.classes = v;
    else if (key == "features") meta.features = v;
    else reader.fail("unknown key '" + std::string(key) + "'");
  }
  return meta;
}

DatasetBundle load_dataset(const fs::path& dir) {
  const fs::path nodes_path = dir / "nodes.tsv";
  const fs::path edges_path = dir / "edges.tsv";
  const fs::path meta_path = dir / "meta.tsv";
  for (const auto& p : {nodes_path, edges_path}) {
    if (!fs::exists(p)) throw DataError("missing dataset file " + p.string());
  }
  DatasetMeta meta;
  if (fs::exists(meta_path)) meta = load_meta(meta_path);

  struct Row {
    std::string label;
    std::vector<std::pair<Index, double>> entries;
  };
  std::vector<std::optional<Row>> rows;
  std::optional<Index> dense_width;
  Index max_sparse_idx = -1;
  {
    TsvReader reader(nodes_path);
    std::string line;
    while (reader.next(line)) {
      const auto cols = split(line, '\t');
      if (cols.size() < 2 || cols.size() > 3) {
        reader.fail("expected node_id<TAB>label<TAB>features");
      }
      Index id = 0;
      if (!parse_number(cols[0], id) || id < 0) {
        reader.fail("bad node id '" + std::string(cols[0]) + "'");
      }
      if (cols[1].empty()) reader.fail("empty label");
      Row row{std::string(cols[1]), {}};
      const auto tokens = cols.size() == 3 ? split_ws(cols[2]) : std::vector<std::string_view>{};
      const bool sparse = std::any_of(tokens.begin(), tokens.end(), [](std::string_view t) {
        return t.find(':') != std::string_view::npos;
      });
      if (sparse) {
        for (auto tok : tokens) {
          const auto colon = tok.find(':');
          Index idx = 0;
          double val = 0.0;
          if (colon == std::string_view::npos || !parse_number(tok.substr(0, colon), idx) ||
              idx < 0 || !parse_number(tok.substr(colon + 1), val)) {
            reader.fail("bad sparse feature token '" + std::string(tok) + "'");
          }
          if (!std::isfinite(val)) reader.fail("non-finite feature value");
          if (!row.entries.empty() && row.entries.back().first >= idx) {
            reader.fail("sparse feature indices must be strictly increasing");
          }
          if (meta.features && idx >= *meta.features) {
            reader.fail("feature index " + std::to_string(idx) + " >= declared width " +
                        std::to_string(*meta.features));
          }
          max_sparse_idx = std::max(max_sparse_idx, idx);
          row.entries.emplace_back(idx, val);
        }
      } else {
        const auto width = static_cast<Index>(tokens.size());
        if (dense_width && *dense_width != width) {
          reader.fail("ragged feature row: " + std::to_string(width) + " values, expected " +
                      std::to_string(*dense_width));
        }
        if (meta.features && width != 0 && width != *meta.features) {
          reader.fail("feature row has " + std::to_string(width) + " values, meta declares " +
                      std::to_string(*meta.features));
        }
        if (width != 0) dense_width = width;
        for (Index k = 0; k < width; ++k) {
          double val = 0.0;
          if (!parse_number(tokens[k], val)) {
            reader.fail("bad feature value '" + std::string(tokens[k]) + "'");
          }
          if (!std::isfinite(val)) reader.fail("non-finite feature value");
          if (val != 0.0) row.entries.emplace_back(k, val);
        }
      }
      if (id >= static_cast<Index>(rows.size())) rows.resize(id + 1);
      if (rows[id]) reader.fail("duplicate node id " + std::to_string(id));
      rows[id] = std::move(row);
    }
  }
  const auto n = static_cast<Index>(rows.size());
  for (Index i = 0; i < n; ++i) {
    if (!rows[i]) throw DataError("nodes.tsv: node ids not contiguous, missing id " + std::to_string(i));
  }

  DatasetBundle b;
  b.name = meta.name.value_or(dir.filename().string());

  // Class names: lexicographic order of the label strings seen (or declared).
  std::map<std::string, Index> class_index;
  if (meta.labels) {
    for (const auto& s : *meta.labels) class_index.emplace(s, 0);
  } else {
    for (const auto& r : rows) class_index.emplace(r->label, 0);
  }
  for (auto& [name, idx] : class_index) {
    idx = static_cast<Index>(b.class_names.size());
    b.class_names.push_back(name);
  }
  b.labels.resize(n);
  for (Index i = 0; i < n; ++i) {
    const auto it = class_index.find(rows[i]->label);
    if (it == class_index.end()) {
      throw DataError("nodes.tsv: node " + std::to_string(i) + " has unknown label '" +
                      rows[i]->label + "'");
    }
    b.labels[i] = it->second;
  }

  const Index width =
      meta.features.value_or(std::max(dense_width.value_or(0), max_sparse_idx + 1));
  if (dense_width && *dense_width > width) {
    throw DataError("nodes.tsv: dense rows have " + std::to_string(*dense_width) +
                    " values but the feature width is " + std::to_string(width));
  }
  b.features.num_rows = n;
  b.features.num_cols = width;
  b.features.row_offsets.assign(1, 0);
  for (const auto& r : rows) {
    for (const auto& [idx, val] : r->entries) {
      b.features.col_indices.push_back(idx);
      b.features.values.push_back(val);
    }
    b.features.row_offsets.push_back(b.features.nnz());
  }

  EdgeList edges;
  {
    TsvReader reader(edges_path);
    std::string line;
    while (reader.next(line)) {
      const auto cols = split(line, '\t');
      Index u = 0;
      Index v = 0;
      if (cols.size() != 2) {
        reader.fail(cols.size() > 2 ? "weighted or extra edge columns are not supported"
                                    : "expected src<TAB>dst");
      }
      if (!parse_number(cols[0], u) || !parse_number(cols[1], v)) {
        reader.fail("bad edge endpoint");
      }
      if (u < 0 || u >= n || v < 0 || v >= n) {
        reader.fail("dangling edge endpoint (" + std::to_string(u) + ", " + std::to_string(v) +
                    ") with " + std::to_string(n) + " nodes");
      }
      edges.emplace_back(u, v);
    }
  }
  b.edge_rows = static_cast<Index>(edges.size());
  b.graph = build_graph(edges, n);

  if (meta.classes && *meta.classes != b.num_classes()) {
    throw DataError("dataset mismatch: #classes expected " + std::to_string(*meta.classes) +
                    ", got " + std::to_string(b.num_classes()));
  }
  check_summary(summarize(b), meta);
  return b;
}

void save_dataset(const DatasetBundle& b, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "nodes.tsv");
    if (!out) throw DataError("cannot write " + (dir / "nodes.tsv").string());
    for (Index i = 0; i < b.num_nodes(); ++i) {
      out << i << '\t' << b.class_names.at(b.labels[i]) << '\t';
      for (Index k = b.features.row_offsets[i]; k < b.features.row_offsets[i + 1]; ++k) {
        if (k > b.features.row_offsets[i]) out << ' ';
        out << b.features.col_indices[k] << ':' << shortest(b.features.values[k]);
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "edges.tsv");
    if (!out) throw DataError("cannot write " + (dir / "edges.tsv").string());
    for (Index i = 0; i < b.num_nodes(); ++i) {
      for (Index j : b.graph.neighbors(i)) {
        if (i < j) out << i << '\t' << j << '\n';
      }
    }
  }
  {
    std::ofstream out(dir / "meta.tsv");
    if (!out) throw DataError("cannot write " + (dir / "meta.tsv").string());
    out << "name\t" << b.name << '\n'
        << "nodes\t" << b.num_nodes() << '\n'
        << "undirected_edges\t" << b.graph.edge_count() << '\n'
        << "classes\t" << b.num_classes() << '\n'
        << "features\t" << b.num_features() << '\n'
        << "labels\t";
    for (std::size_t c = 0; c < b.class_names.size(); ++c) {
      out << (c ? "," : "") << b.class_names[c];
    }
    out << '\n';
  }
}

SparseMatrix row_normalize_features(const SparseMatrix& f) {
  SparseMatrix out = f;
  for (Index r = 0; r < f.num_rows; ++r) {
    double l1 = 0.0;
    for (Index k = f.row_offsets[r]; k < f.row_offsets[r + 1]; ++k) l1 += std::abs(f.values[k]);
    if (l1 == 0.0) continue;
    for (Index k = f.row_offsets[r]; k < f.row_offsets[r + 1]; ++k) out.values[k] /= l1;
  }
  return out;
}

Dense row_normalize_features(const Dense& f) {
  Dense out = f;
  for (Index r = 0; r < f.rows(); ++r) {
    const double l1 = f.row(r).cwiseAbs().sum();
    if (l1 != 0.0) out.row(r) /= l1;
  }
  return out;
}

DatasetBundle generate_sbm(const SbmParams& params) {
  const auto& [n, num_classes, p_in, p_out, feature_dim, signal, seed] = params;
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) {
    throw std::invalid_argument("generate_sbm: need 0 <= p_out <= p_in <= 1");
  }
  if (n < 1 || num_classes < 1 || num_classes > n || feature_dim < 1) {
    throw std::invalid_argument("generate_sbm: need 1 <= num_classes <= num_nodes, feature_dim >= 1");
  }

  DatasetBundle b;
  b.name = "sbm";
  const int digits = static_cast<int>(std::to_string(num_classes - 1).size());
  for (Index c = 0; c < num_classes; ++c) {
    std::string id = std::to_string(c);
    b.class_names.push_back("c" + std::string(digits - id.size(), '0') + id);
  }
  b.labels.resize(n);
  for (Index i = 0; i < n; ++i) b.labels[i] = i * num_classes / n;

  SplitMix64 graph_rng = stream_rng(seed, Stream::kGraph);
  EdgeList edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double p = b.labels[i] == b.labels[j] ? p_in : p_out;
      if (graph_rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  b.graph = build_graph(edges, n);
  b.edge_rows = static_cast<Index>(edges.size());

  SplitMix64 feature_rng = stream_rng(seed, Stream::kFeatures);
  Dense f(n, feature_dim);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < feature_dim; ++k) f(i, k) = feature_rng.normal();
    f(i, b.labels[i] % feature_dim) += signal;
  }
  b.features = SparseMatrix::from_dense(f);
  return b;
}

}  // namespace gcnsel
