#include "vecscope/vecstore.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vecscope/error.hpp"
#include "vecscope/expr.hpp"
#include "vecscope/text.hpp"

namespace vecscope {

namespace {

// Fields separated by ASCII spaces or tabs. Row tokens never contain
// whitespace, so this is enough for both text formats.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

bool is_word2vec_header(std::string_view line) {
  auto fields = split_fields(line);
  return fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1]);
}

std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("invalid integer in header: '" + std::string(s) + "'", line);
  }
  return value;
}

double parse_value(std::string_view s, std::size_t line) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) {
    throw FormatError("non-finite value '" + std::string(s) + "'", line);
  }
  if (ec != std::errc() || ptr != last) {
    throw FormatError("invalid number '" + std::string(s) + "'", line);
  }
  if (!std::isfinite(value)) {
    throw FormatError("non-finite value '" + std::string(s) + "'", line);
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read vector file '" + path.string() + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FormatError("I/O error reading '" + path.string() + "'", 0);
  return std::move(buf).str();
}

}  // namespace

StoreFormat parse_store_format(std::string_view name) {
  if (name == "auto") return StoreFormat::kAuto;
  if (name == "word2vec" || name == "word2vec_text") return StoreFormat::kWord2VecText;
  if (name == "glove" || name == "glove_text") return StoreFormat::kGloveText;
  throw InvalidArgument("unknown vector format '" + std::string(name) + "'");
}

std::string_view to_string(StoreFormat format) {
  switch (format) {
    case StoreFormat::kAuto: return "auto";
    case StoreFormat::kWord2VecText: return "word2vec_text";
    case StoreFormat::kGloveText: return "glove_text";
  }
  return "auto";
}

VectorStore::VectorStore(std::string label, std::size_t dim, std::vector<std::string> tokens,
                         std::vector<double> row_major)
    : label_(std::move(label)), dim_(dim), tokens_(std::move(tokens)), data_(std::move(row_major)) {
  if (dim_ == 0) throw InvalidArgument("vector store dimension must be positive");
  if (data_.size() != tokens_.size() * dim_) {
    throw InvalidArgument("vector store data does not match " + std::to_string(tokens_.size()) +
                          " tokens of dimension " + std::to_string(dim_));
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw InvalidArgument("duplicate token \"" + tokens_[i] + "\" in vector store");
    }
  }
  for (double x : data_) {
    if (!std::isfinite(x)) throw InvalidArgument("vector store contains a non-finite value");
  }
}

bool VectorStore::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

std::optional<std::size_t> VectorStore::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VectorStore load_store(const std::filesystem::path& path, StoreFormat format) {
  const std::string content = read_file(path);
  std::string_view rest = content;
  if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);

  std::vector<std::string> tokens;
  std::vector<double> data;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t dim = 0;
  std::size_t header_count = 0;
  bool have_header = false;
  std::size_t duplicates = 0;
  std::size_t rows = 0;

  std::size_t line_no = 0;
  while (!rest.empty()) {
    std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (line.ends_with('\r')) line.remove_suffix(1);

    if (line_no == 1) {
      const bool header = is_word2vec_header(line);
      if (format == StoreFormat::kAuto) {
        format = header ? StoreFormat::kWord2VecText : StoreFormat::kGloveText;
      }
      if (format == StoreFormat::kWord2VecText) {
        if (!header) throw FormatError("expected word2vec header '<count> <dim>'", line_no);
        auto fields = split_fields(line);
        header_count = parse_count(fields[0], line_no);
        dim = parse_count(fields[1], line_no);
        if (dim == 0) throw FormatError("header declares dimension 0", line_no);
        have_header = true;
        continue;
      }
    }

    auto fields = split_fields(line);
    if (fields.empty()) continue;
    const std::size_t values = fields.size() - 1;
    if (dim == 0) {
      if (values == 0) throw FormatError("row has a token but no values", line_no);
      dim = values;
    }
    if (values != dim) {
      throw FormatError("dimension mismatch: expected " + std::to_string(dim) + " values, found " +
                            std::to_string(values),
                        line_no);
    }
    ++rows;
    std::string token(fields[0]);
    // Parse before the duplicate check so bad values are reported regardless.
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < dim; ++i) row[i] = parse_value(fields[i + 1], line_no);
    if (seen.contains(token)) {
      ++duplicates;
      continue;
    }
    seen.emplace(token, tokens.size());
    tokens.push_back(std::move(token));
    data.insert(data.end(), row.begin(), row.end());
  }

  if (tokens.empty()) {
    throw FormatError("vector file '" + path.string() + "' is empty", 0);
  }

  VectorStore store(path.stem().string(), dim, std::move(tokens), std::move(data));
  store.duplicates_ = duplicates;
  if (duplicates > 0) {
    store.warnings_.push_back(std::to_string(duplicates) +
                              " duplicate token row(s) ignored (first occurrence kept)");
  }
  if (have_header && header_count != rows) {
    store.warnings_.push_back("header declares " + std::to_string(header_count) + " rows, found " +
                              std::to_string(rows));
  }
  return store;
}

void save_store(const VectorStore& store, const std::filesystem::path& path, StoreFormat format) {
  if (format == StoreFormat::kAuto) {
    throw InvalidArgument("save_store needs an explicit format");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");

  fmt::memory_buffer buf;
  if (format == StoreFormat::kWord2VecText) {
    fmt::format_to(std::back_inserter(buf), "{} {}\n", store.size(), store.dim());
  }
  for (std::size_t i = 0; i < store.size(); ++i) {
    fmt::format_to(std::back_inserter(buf), "{}", store.token(i));
    for (double x : store.row(i)) fmt::format_to(std::back_inserter(buf), " {:.17g}", x);
    buf.push_back('\n');
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.flush();
  if (!out) throw Error("I/O error writing '" + path.string() + "'");
}

Embedding lookup(const VectorStore& store, std::string_view token) {
  auto idx = store.index_of(token);
  if (!idx) throw OovError({std::string(token)});
  return Embedding(std::string(token), Vector(store.row(*idx)));
}

Embedding embed_phrase(const VectorStore& store, std::string_view phrase) {
  const std::string_view trimmed = text::trim(phrase);
  const auto tokens = text::split_whitespace(trimmed);
  if (tokens.empty()) throw InvalidArgument("phrase is empty");

  std::vector<std::string> missing;
  std::vector<double> sum(store.dim(), 0.0);
  for (const auto& token : tokens) {
    auto idx = store.index_of(token);
    if (!idx) {
      missing.push_back(token);
      continue;
    }
    auto row = store.row(*idx);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += row[i];
  }
  if (!missing.empty()) throw OovError(std::move(missing));

  if (tokens.size() == 1) return lookup(store, tokens.front());
  return Embedding(std::string(trimmed), Vector(std::move(sum)),
                   '"' + std::string(trimmed) + '"');
}

EmbeddingSet get_set(const VectorStore& store, std::span<const std::string> specs) {
  if (specs.empty()) throw InvalidArgument("no expressions given");
  EmbeddingSet set;
  for (const auto& spec : specs) set.add(evaluate(parse(spec), store));
  return set;
}

Eigen::MatrixXd featurize(const VectorStore& store, std::span<const std::string> texts) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(texts.size()),
                      static_cast<Eigen::Index>(store.dim()));
  for (std::size_t r = 0; r < texts.size(); ++r) {
    Embedding e = [&] {
      try {
        return embed_phrase(store, texts[r]);
      } catch (const OovError& err) {
        throw OovError(err.missing(), "row " + std::to_string(r));
      } catch (const Error& err) {
        throw InvalidArgument("row " + std::to_string(r) + ": " + err.what());
      }
    }();
    for (std::size_t c = 0; c < store.dim(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = e.vector()[c];
    }
  }
  return out;
}

}  // namespace vecscope
