#include "swad/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "swad/error.hpp"
#include "swad/hash.hpp"

namespace swad {
namespace {

// Whole file, transparently gunzipped when compressed.
std::vector<unsigned char> read_maybe_gzip(const std::filesystem::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (f == nullptr) throw DataError("cannot open " + path.string());
  std::vector<unsigned char> out;
  unsigned char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof buf)) > 0) out.insert(out.end(), buf, buf + n);
  const bool failed = n < 0;
  gzclose(f);
  if (failed) throw DataError("read error (corrupt gzip?) in " + path.string());
  return out;
}

std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

void put_be32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

std::string hex32(std::uint32_t v) {
  std::ostringstream s;
  s << "0x" << std::hex;
  s.width(8);
  s.fill('0');
  s << v;
  return s.str();
}

void check_magic(std::uint32_t got, std::uint32_t want, const std::filesystem::path& path) {
  if (got != want) {
    throw DataError("bad IDX magic " + hex32(got) + " in " + path.string() + " (expected " +
                    hex32(want) + ")");
  }
}

}  // namespace

RawDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const auto img = read_maybe_gzip(images);
  const auto lab = read_maybe_gzip(labels);
  if (img.size() < 16) throw DataError("truncated IDX image header in " + images.string());
  if (lab.size() < 8) throw DataError("truncated IDX label header in " + labels.string());
  check_magic(read_be32(img, 0), 0x00000803, images);
  check_magic(read_be32(lab, 0), 0x00000801, labels);

  const std::size_t n = read_be32(img, 4);
  const std::size_t rows = read_be32(img, 8);
  const std::size_t cols = read_be32(img, 12);
  const std::size_t n_labels = read_be32(lab, 4);
  if (n != n_labels) {
    throw DataError("IDX count mismatch: " + std::to_string(n) + " images vs " +
                    std::to_string(n_labels) + " labels");
  }
  const std::size_t dim = rows * cols;
  if (img.size() < 16 + n * dim) {
    throw DataError("truncated IDX image data in " + images.string() + ": expected " +
                    std::to_string(n * dim) + " pixel bytes, found " +
                    std::to_string(img.size() - 16));
  }
  if (lab.size() < 8 + n) throw DataError("truncated IDX label data in " + labels.string());

  RawDataset out{Matrix(n, dim), std::vector<int>(n), images.string()};
  auto data = out.features.data();
  for (std::size_t i = 0; i < n * dim; ++i) data[i] = static_cast<double>(img[16 + i]) / 255.0;
  for (std::size_t i = 0; i < n; ++i) out.class_labels[i] = lab[8 + i];
  return out;
}

void write_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
               const RawDataset& data, std::uint32_t image_rows, std::uint32_t image_cols) {
  if (data.features.cols() != std::size_t{image_rows} * image_cols) {
    throw DimensionError("write_idx: feature width " + std::to_string(data.features.cols()) +
                         " != " + std::to_string(image_rows) + "x" + std::to_string(image_cols));
  }
  std::ofstream img(images, std::ios::binary);
  std::ofstream lab(labels, std::ios::binary);
  if (!img || !lab) throw DataError("cannot write IDX files");
  const auto n = static_cast<std::uint32_t>(data.size());
  put_be32(img, 0x00000803);
  put_be32(img, n);
  put_be32(img, image_rows);
  put_be32(img, image_cols);
  for (double v : data.features.data()) {
    const long px = std::lround(v * 255.0);
    if (px < 0 || px > 255) throw ValueError("write_idx: feature outside [0, 1]");
    img.put(static_cast<char>(px));
  }
  put_be32(lab, 0x00000801);
  put_be32(lab, n);
  for (int y : data.class_labels) {
    if (y < 0 || y > 255) throw ValueError("write_idx: label outside 0..255");
    lab.put(static_cast<char>(y));
  }
}

namespace {

// Splits one CSV record; supports quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

double parse_number(const std::string& text, std::size_t line_no, const std::string& column) {
  std::string_view s(text);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError("non-numeric cell '" + text + "' at line " + std::to_string(line_no) +
                    ", column '" + column + "'");
  }
  return v;
}

}  // namespace

RawDataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.empty() || line == "\r") {
    throw DataError("empty dataset: " + path.string() + " has no header");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line);
  const auto it = std::find(header.begin(), header.end(), label_column);
  if (it == header.end()) {
    std::string names;
    for (const auto& h : header) names += (names.empty() ? "" : ", ") + h;
    throw DataError("label column '" + label_column + "' not found; available columns: " + names);
  }
  const auto label_idx = static_cast<std::size_t>(it - header.begin());

  std::vector<double> features;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError("ragged row at line " + std::to_string(line_no) + ": " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_number(cells[c], line_no, header[c]);
      if (c == label_idx) {
        if (v != std::floor(v)) {
          throw DataError("label '" + cells[c] + "' at line " + std::to_string(line_no) +
                          " is not an integer");
        }
        labels.push_back(static_cast<int>(v));
      } else {
        features.push_back(v);
      }
    }
  }
  if (labels.empty()) throw DataError("empty dataset: " + path.string() + " has no data rows");
  const std::size_t n = labels.size();
  return RawDataset{Matrix(n, header.size() - 1, std::move(features)), std::move(labels),
                    path.string()};
}

RawDataset load_cifar10(const std::vector<std::filesystem::path>& batches) {
  constexpr std::size_t kPixels = 3072;
  std::vector<double> features;
  std::vector<int> labels;
  std::string source;
  for (const auto& path : batches) {
    const auto bytes = read_maybe_gzip(path);
    if (bytes.empty() || bytes.size() % (kPixels + 1) != 0) {
      throw DataError("CIFAR-10 batch " + path.string() + " is not a whole number of records");
    }
    for (std::size_t off = 0; off < bytes.size(); off += kPixels + 1) {
      if (bytes[off] > 9) throw DataError("CIFAR-10 label out of range in " + path.string());
      labels.push_back(bytes[off]);
      for (std::size_t p = 0; p < kPixels; ++p)
        features.push_back(static_cast<double>(bytes[off + 1 + p]) / 255.0);
    }
    source += (source.empty() ? "" : ";") + path.string();
  }
  if (labels.empty()) throw DataError("no CIFAR-10 batches given");
  const std::size_t n = labels.size();
  return RawDataset{Matrix(n, kPixels, std::move(features)), std::move(labels), source};
}

RawDataset make_synthetic(std::size_t samples, std::size_t dim, std::size_t classes,
                          const Rng& class_rng, Rng& sample_rng) {
  constexpr std::size_t kRank = 3;
  if (dim == 0 || classes == 0) throw ValueError("make_synthetic: dim and classes must be >= 1");
  std::vector<Matrix> mixing, offsets;
  for (std::size_t c = 0; c < classes; ++c) {
    Rng r = class_rng.split(c);
    mixing.push_back(rng_uniform(r, kRank, dim, -4.0, 4.0));
    offsets.push_back(rng_uniform(r, 1, dim, -1.0, 1.0));
  }
  RawDataset out{Matrix(samples, dim), std::vector<int>(samples), "synthetic"};
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t c = i % classes;
    const Matrix u = rng_uniform(sample_rng, 1, kRank, 0.0, 1.0);
    const Matrix pre = elementwise(matmul(u, mixing[c]), offsets[c], ElementOp::kAdd);
    auto row = out.features.row(i);
    for (std::size_t j = 0; j < dim; ++j) row[j] = 1.0 / (1.0 + std::exp(-pre(0, j)));
    out.class_labels[i] = static_cast<int>(c);
  }
  return out;
}

Matrix Normalization::apply(const Matrix& x) const {
  if (kind == "identity") return x;
  if (offset.size() != x.cols() || scale.size() != x.cols()) {
    throw DimensionError("normalization fitted on " + std::to_string(offset.size()) +
                         " features applied to " + x.shape_string());
  }
  Matrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = (r[j] - offset[j]) * scale[j];
  }
  return out;
}

nlohmann::json Normalization::to_json() const {
  return {{"kind", kind}, {"offset", offset}, {"scale", scale}};
}

Normalization fit_minmax(const Matrix& x) {
  Normalization n{"minmax", std::vector<double>(x.cols()), std::vector<double>(x.cols(), 1.0)};
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double lo = x(0, j), hi = x(0, j);
    for (std::size_t i = 1; i < x.rows(); ++i) {
      lo = std::min(lo, x(i, j));
      hi = std::max(hi, x(i, j));
    }
    n.offset[j] = lo;
    n.scale[j] = hi > lo ? 1.0 / (hi - lo) : 1.0;
  }
  return n;
}

namespace {

void check_fraction(double f, const char* name, double hi) {
  if (!(f > 0.0 && f <= hi)) {
    throw ValueError(std::string(name) + "=" + std::to_string(f) + " outside (0, " +
                     std::to_string(hi) + "]");
  }
}

// Partitions indices of `labels` into normal / abnormal for `normal_class`.
void partition(const std::vector<int>& labels, int normal_class, std::vector<std::size_t>& normal,
               std::vector<std::size_t>& abnormal) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] == normal_class ? normal : abnormal).push_back(i);
}

std::size_t slice_count(double fraction, std::size_t n) {
  // floor with a small guard so e.g. 0.1 * 400 is 40, not 39.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

std::vector<std::size_t> take(const std::vector<std::size_t>& pool,
                              const std::vector<std::size_t>& perm, std::size_t begin,
                              std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(pool[perm[i]]);
  std::sort(out.begin(), out.end());
  return out;
}

LabeledSet labeled_rows(const RawDataset& data, const std::vector<std::size_t>& idx,
                        int normal_class) {
  LabeledSet s{gather_rows(data.features, idx), {}};
  for (std::size_t i : idx) s.y.push_back(data.class_labels[i] == normal_class ? 0 : 1);
  return s;
}

void finish_split(OneClassSplit& split, NormalizationKind kind) {
  if (kind == NormalizationKind::kMinMax) {
    split.normalization = fit_minmax(split.train_x);
    split.train_x = split.normalization.apply(split.train_x);
    split.validation.x = split.normalization.apply(split.validation.x);
    split.test.x = split.normalization.apply(split.test.x);
  }
}

}  // namespace

OneClassSplit make_one_class_split(const RawDataset& train, const RawDataset& test,
                                   int normal_class, double val_fraction, const Rng& rng,
                                   NormalizationKind normalization) {
  check_fraction(val_fraction, "val_fraction", 0.5);
  if (train.features.cols() != test.features.cols()) {
    throw DimensionError("train/test feature widths differ");
  }
  std::vector<std::size_t> normal, abnormal;
  partition(train.class_labels, normal_class, normal, abnormal);
  if (normal.empty()) {
    throw ValueError("normal class " + std::to_string(normal_class) +
                     " does not occur in the training data");
  }
  const std::size_t n_val = slice_count(val_fraction, normal.size());
  if (n_val == 0) throw ValueError("val_fraction leaves no normal validation samples");
  if (abnormal.size() < n_val) {
    throw ValueError("not enough abnormal samples (" + std::to_string(abnormal.size()) +
                     ") for a validation draw of " + std::to_string(n_val));
  }

  Rng normal_rng = rng.split("split/normal");
  Rng abnormal_rng = rng.split("split/abnormal");
  const auto normal_perm = random_permutation(normal_rng, normal.size());
  const auto abnormal_perm = random_permutation(abnormal_rng, abnormal.size());

  OneClassSplit split;
  split.normal_class = normal_class;
  split.val_fraction = val_fraction;
  split.seed = rng.seed();
  split.canonical_test = true;
  split.train_indices = take(normal, normal_perm, n_val, normal.size());
  const auto val_normal = take(normal, normal_perm, 0, n_val);
  const auto val_abnormal = take(abnormal, abnormal_perm, 0, n_val);
  split.val_indices = val_normal;
  split.val_indices.insert(split.val_indices.end(), val_abnormal.begin(), val_abnormal.end());
  for (std::size_t i = 0; i < test.size(); ++i) split.test_indices.push_back(i);

  split.train_x = gather_rows(train.features, split.train_indices);
  split.validation = labeled_rows(train, split.val_indices, normal_class);
  split.test = labeled_rows(test, split.test_indices, normal_class);
  const auto positives = std::count(split.test.y.begin(), split.test.y.end(), 1);
  if (positives == 0 || positives == static_cast<long>(split.test.y.size())) {
    throw ValueError("test data must contain both normal and abnormal samples");
  }
  finish_split(split, normalization);
  return split;
}

OneClassSplit make_one_class_split(const RawDataset& data, int normal_class, double val_fraction,
                                   double test_fraction, const Rng& rng,
                                   NormalizationKind normalization) {
  check_fraction(val_fraction, "val_fraction", 0.5);
  check_fraction(test_fraction, "test_fraction", 0.5);
  std::vector<std::size_t> normal, abnormal;
  partition(data.class_labels, normal_class, normal, abnormal);
  if (normal.empty()) {
    throw ValueError("normal class " + std::to_string(normal_class) + " does not occur in the data");
  }
  const std::size_t n_val = slice_count(val_fraction, normal.size());
  const std::size_t n_test = slice_count(test_fraction, normal.size());
  if (n_val == 0 || n_test == 0 || n_val + n_test >= normal.size()) {
    throw ValueError("too few normal samples for train/validation/test partitions");
  }
  if (abnormal.size() < n_val + 1) {
    throw ValueError("not enough abnormal samples (" + std::to_string(abnormal.size()) +
                     ") for validation and test");
  }

  Rng normal_rng = rng.split("split/normal");
  Rng abnormal_rng = rng.split("split/abnormal");
  const auto normal_perm = random_permutation(normal_rng, normal.size());
  const auto abnormal_perm = random_permutation(abnormal_rng, abnormal.size());

  OneClassSplit split;
  split.normal_class = normal_class;
  split.val_fraction = val_fraction;
  split.seed = rng.seed();
  split.train_indices = take(normal, normal_perm, n_val + n_test, normal.size());
  split.val_indices = take(normal, normal_perm, 0, n_val);
  const auto val_abnormal = take(abnormal, abnormal_perm, 0, n_val);
  split.val_indices.insert(split.val_indices.end(), val_abnormal.begin(), val_abnormal.end());
  split.test_indices = take(normal, normal_perm, n_val, n_val + n_test);
  const auto test_abnormal = take(abnormal, abnormal_perm, n_val, abnormal.size());
  split.test_indices.insert(split.test_indices.end(), test_abnormal.begin(), test_abnormal.end());

  split.train_x = gather_rows(data.features, split.train_indices);
  split.validation = labeled_rows(data, split.val_indices, normal_class);
  split.test = labeled_rows(data, split.test_indices, normal_class);
  finish_split(split, normalization);
  return split;
}

nlohmann::json split_manifest(const OneClassSplit& split) {
  auto partition_json = [](const Matrix& x, const std::vector<int>* y) {
    Sha256 h;
    h.update(x);
    nlohmann::json j{{"rows", x.rows()}, {"cols", x.cols()}};
    if (y != nullptr) {
      h.update(std::span<const int>(*y));
      const auto abnormal = std::count(y->begin(), y->end(), 1);
      j["abnormal"] = abnormal;
      j["normal"] = static_cast<long>(y->size()) - abnormal;
    }
    j["sha256"] = h.hex_digest();
    return j;
  };
  return {
      {"seed", split.seed},
      {"normal_class", split.normal_class},
      {"val_fraction", split.val_fraction},
      {"canonical_test", split.canonical_test},
      {"normalization", split.normalization.kind},
      {"partitions",
       {{"train", partition_json(split.train_x, nullptr)},
        {"validation", partition_json(split.validation.x, &split.validation.y)},
        {"test", partition_json(split.test.x, &split.test.y)}}},
  };
}

}  // namespace swad
