#include "vecscope/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "vecscope/bias.hpp"
#include "vecscope/canonical_json.hpp"
#include "vecscope/error.hpp"
#include "vecscope/expr.hpp"
#include "vecscope/plotspec.hpp"
#include "vecscope/retrieval.hpp"
#include "vecscope/server.hpp"
#include "vecscope/text.hpp"
#include "vecscope/transforms.hpp"
#include "vecscope/vecstore.hpp"

namespace vecscope::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::vector<std::string> vectors;
  std::string format = "auto";
  std::string metric = "cosine";
  std::string output;
  bool json = false;
};

struct WordArgs {
  std::string words;
  std::string words_file;

  void attach(CLI::App* app) {
    app->add_option("--words", words, "Comma-separated expressions (quote multi-word phrases)");
    app->add_option("--words-file", words_file, "File with one expression per line");
  }
};

struct Args {
  Globals g;
  WordArgs words;
  std::string expr;
  std::size_t n = 10;
  bool exclude_inputs = false;
  bool keep_inputs = false;
  std::string pos;
  std::string neg;
  std::string pairs_file;
  std::string x_axis;
  std::string y_axis;
  bool show_axis_point = false;
  bool svg = false;
  int width = 640;
  int height = 480;
  std::size_t k = 2;
  std::string report_token;
  std::string texts_file;
  std::string out_csv;
  std::string to;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string static_dir;
};

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::istringstream in(read_text_file(path));
  for (std::string line; std::getline(in, line);) {
    auto trimmed = text::trim(line);
    if (!trimmed.empty()) lines.emplace_back(trimmed);
  }
  return lines;
}

std::vector<std::string> word_list(const WordArgs& w) {
  if (!w.words.empty() && !w.words_file.empty()) {
    throw UsageError("give either --words or --words-file, not both");
  }
  std::vector<std::string> out =
      w.words_file.empty() ? text::split_list(w.words) : read_lines(w.words_file);
  if (out.empty()) throw UsageError("no words given (use --words or --words-file)");
  return out;
}

std::vector<VectorStore> load_stores(const Globals& g, std::ostream& err) {
  if (g.vectors.empty()) throw UsageError("at least one --vectors PATH is required");
  const StoreFormat format = parse_store_format(g.format);
  std::vector<VectorStore> stores;
  for (const auto& spec : g.vectors) {
    std::string label;
    std::string path = spec;
    const auto eq = spec.find('=');
    if (eq != std::string::npos && eq > 0 && !std::filesystem::exists(spec)) {
      label = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    }
    VectorStore store = load_store(path, format);
    if (!label.empty()) store = std::move(store).relabeled(label);
    for (const auto& w : store.warnings()) err << "warning: " << store.label() << ": " << w << '\n';
    stores.push_back(std::move(store));
  }
  return stores;
}

std::string fixed(double v) { return fmt::format("{:.6f}", v); }

std::string vector_head(const Vector& v, std::size_t limit = 10) {
  std::string s = "[";
  for (std::size_t i = 0; i < std::min(limit, v.dim()); ++i) {
    if (i > 0) s += ", ";
    s += fmt::format("{:.6g}", v[i]);
  }
  if (v.dim() > limit) s += ", ...";
  return s + "]";
}

std::string neighbors_text(const Neighbors& neighbors) {
  std::string s;
  for (const auto& item : neighbors.items) {
    s += item.embedding.name() + '\t' + fixed(item.distance) + '\n';
  }
  return s;
}

json neighbors_json(const Neighbors& neighbors) {
  json out = json::array();
  for (const auto& item : neighbors.items) {
    out.push_back({{"name", item.embedding.name()}, {"distance", item.distance}});
  }
  return out;
}

void report_skips(const Neighbors& neighbors, std::ostream& err) {
  if (neighbors.skipped_zero_norm > 0) {
    err << "warning: skipped " << neighbors.skipped_zero_norm
        << " zero-norm vector(s) under the cosine metric\n";
  }
}

std::string matrix_text(const HeatmapSpec& spec) {
  std::string s = "label";
  for (const auto& l : spec.labels) s += '\t' + l;
  s += '\n';
  for (std::size_t i = 0; i < spec.labels.size(); ++i) {
    s += spec.labels[i];
    for (double v : spec.values[i]) s += '\t' + fixed(v);
    s += '\n';
  }
  return s;
}

std::string transform_text(const TransformResult& r) {
  std::string s = "name";
  for (std::size_t i = 0; i < r.k; ++i) s += '\t' + r.method + "_" + std::to_string(i);
  s += '\n';
  for (std::size_t i = 0; i + r.k < r.reduced.size(); ++i) {
    s += r.reduced[i].name();
    for (double v : r.reduced[i].vector()) s += '\t' + fixed(v);
    s += '\n';
  }
  if (!r.explained_variance.empty()) {
    s += "explained_variance";
    for (double v : r.explained_variance) s += '\t' + fixed(v);
    s += '\n';
  }
  return s;
}

std::string plot_text(const PlotSpec& spec) {
  std::string s = "name\t" + spec.x_label + '\t' + spec.y_label + '\n';
  for (const auto& p : spec.points) s += p.name + '\t' + fixed(p.x) + '\t' + fixed(p.y) + '\n';
  return s;
}

std::string csv_matrix(const Eigen::MatrixXd& m) {
  fmt::memory_buffer buf;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) buf.push_back(',');
      fmt::format_to(std::back_inserter(buf), "{:.17g}", m(r, c));
    }
    buf.push_back('\n');
  }
  return fmt::to_string(buf);
}

class Output {
 public:
  Output(const Globals& g, std::ostream& out) : path_(g.output), out_(out) {}

  void write(const std::string& s) const {
    if (path_.empty()) {
      out_ << s;
      return;
    }
    std::ofstream file(path_, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot open '" + path_ + "' for writing");
    file << s;
    if (!file) throw Error("I/O error writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ostream& out_;
};

std::string chart_json_line(const json& j) { return canonical_json(j) + '\n'; }

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"Inspect word and sentence embeddings stored as word2vec/GloVe text files."};
  app.name("vecscope");
  app.require_subcommand(1);
  app.add_option("--vectors", a.g.vectors, "Vector file; repeatable; LABEL=PATH sets the label");
  app.add_option("--format", a.g.format, "Vector file format")
      ->check(CLI::IsMember({"auto", "word2vec", "glove"}));
  app.add_option("--metric", a.g.metric, "Distance metric")
      ->check(CLI::IsMember({"cosine", "euclidean"}));
  app.add_option("--output", a.g.output, "Write results to this file instead of stdout");
  app.add_flag("--json", a.g.json, "Machine-readable canonical JSON output");

  auto sub = [&](const char* name, const char* desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  CLI::App* similar = sub("similar", "Nearest neighbours of an expression");
  similar->add_option("--expr", a.expr, "Expression, e.g. \"king - man + woman\"")->required();
  similar->add_option("-n", a.n, "Number of neighbours")->check(CLI::PositiveNumber);
  similar->add_flag("--exclude-inputs", a.exclude_inputs, "Drop the expression's own tokens");

  CLI::App* analogy_cmd = sub("analogy", "sum(pos) - sum(neg), ranked");
  analogy_cmd->add_option("--pos", a.pos, "Comma-separated positive tokens")->required();
  analogy_cmd->add_option("--neg", a.neg, "Comma-separated negative tokens");
  analogy_cmd->add_option("-n", a.n, "Number of neighbours")->check(CLI::PositiveNumber);
  analogy_cmd->add_flag("--keep-inputs", a.keep_inputs, "Do not exclude the input tokens");

  CLI::App* eval_cmd = sub("eval", "Evaluate an expression");
  eval_cmd->add_option("--expr", a.expr, "Expression")->required();

  CLI::App* distance_cmd = sub("distance", "Pairwise distance matrix");
  a.words.attach(distance_cmd);
  distance_cmd->add_option("--pairs-file", a.pairs_file, "CSV of token_a,token_b differences");
  distance_cmd->add_flag("--svg", a.svg, "Render a heatmap SVG");

  CLI::App* plot_cmd = sub("plot", "Charts");
  plot_cmd->require_subcommand(1);
  CLI::App* scatter = plot_cmd->add_subcommand("scatter", "Project onto two axis expressions");
  scatter->fallthrough();
  a.words.attach(scatter);
  scatter->add_option("--x-axis", a.x_axis, "X axis expression")->required();
  scatter->add_option("--y-axis", a.y_axis, "Y axis expression")->required();
  scatter->add_flag("--show-axis-point", a.show_axis_point, "Also plot the axis embeddings");
  CLI::App* arrows = plot_cmd->add_subcommand("arrows", "Arrows from the origin (2-d stores)");
  arrows->fallthrough();
  a.words.attach(arrows);
  for (CLI::App* c : {scatter, arrows}) {
    c->add_flag("--svg", a.svg, "Render SVG instead of JSON");
    c->add_option("--width", a.width, "SVG width in pixels")->check(CLI::PositiveNumber);
    c->add_option("--height", a.height, "SVG height in pixels")->check(CLI::PositiveNumber);
  }

  CLI::App* pca_cmd = sub("pca", "Principal component coordinates");
  CLI::App* mds_cmd = sub("mds", "Classical multidimensional scaling coordinates");
  for (CLI::App* c : {pca_cmd, mds_cmd}) {
    // Each subcommand needs its own option objects bound to the shared fields.
    c->add_option("--words", a.words.words, "Comma-separated expressions");
    c->add_option("--words-file", a.words.words_file, "File with one expression per line");
    c->add_option("-k", a.k, "Number of components")->check(CLI::PositiveNumber);
    c->add_flag("--svg", a.svg, "Render the first two components as SVG");
  }

  CLI::App* debias_cmd = sub("debias", "Remove a bias direction from a set");
  a.words.attach(debias_cmd);
  debias_cmd->add_option("--pairs-file", a.pairs_file, "CSV of token_a,token_b pairs")->required();
  debias_cmd->add_option("--report-token", a.report_token, "Report neighbourhood overlap for this");
  debias_cmd->add_option("-n", a.n, "Neighbourhood size for the report")->check(CLI::PositiveNumber);

  CLI::App* featurize_cmd = sub("featurize", "Phrase feature matrix as CSV");
  featurize_cmd->add_option("--texts-file", a.texts_file, "One phrase per line")->required();
  featurize_cmd->add_option("--out", a.out_csv, "Output CSV (default: stdout)");

  CLI::App* convert_cmd = sub("convert", "Rewrite the first store in another format");
  convert_cmd->add_option("--to", a.to, "Target format")
      ->required()
      ->check(CLI::IsMember({"word2vec", "glove"}));

  CLI::App* compare_cmd = sub("compare", "One scatter chart per store on shared axes");
  a.words.attach(compare_cmd);
  compare_cmd->add_option("--x-axis", a.x_axis, "X axis expression")->required();
  compare_cmd->add_option("--y-axis", a.y_axis, "Y axis expression")->required();
  compare_cmd->add_flag("--show-axis-point", a.show_axis_point, "Also plot the axis embeddings");
  compare_cmd->add_flag("--svg", a.svg, "Render side-by-side SVG panels");

  CLI::App* serve_cmd = sub("serve", "Run the HTTP JSON API");
  serve_cmd->add_option("--port", a.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", a.host, "Interface to bind");
  serve_cmd->add_option("--static", a.static_dir, "Directory of explorer UI assets to serve at /");

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    const Output sink(a.g, out);
    const Metric metric = parse_metric(a.g.metric);
    std::vector<VectorStore> stores = load_stores(a.g, err);
    const VectorStore& store = stores.front();
    const int w = a.width, h = a.height;

    if (similar->parsed()) {
      const Expr expr = parse(a.expr);
      Exclusions exclude;
      if (a.exclude_inputs) {
        for (auto& t : leaf_tokens(expr)) exclude.insert(std::move(t));
      }
      const Neighbors result = score_similar(store, evaluate(expr, store), a.n, metric, exclude);
      report_skips(result, err);
      sink.write(a.g.json ? chart_json_line(neighbors_json(result)) : neighbors_text(result));
    } else if (analogy_cmd->parsed()) {
      const auto pos = text::split_list(a.pos);
      const auto neg = text::split_list(a.neg);
      const Neighbors result = analogy(store, pos, neg, a.n, metric, !a.keep_inputs);
      report_skips(result, err);
      sink.write(a.g.json ? chart_json_line(neighbors_json(result)) : neighbors_text(result));
    } else if (eval_cmd->parsed()) {
      const Embedding e = evaluate(parse(a.expr), store);
      if (a.g.json) {
        sink.write(chart_json_line(
            {{"name", e.name()}, {"dim", e.dim()}, {"vector", e.vector().components()}}));
      } else {
        sink.write("name: " + e.name() + "\ndim: " + std::to_string(e.dim()) +
                   "\nvector: " + vector_head(e.vector()) + '\n');
      }
    } else if (distance_cmd->parsed()) {
      EmbeddingSet set;
      if (!a.pairs_file.empty()) {
        if (!a.words.words.empty() || !a.words.words_file.empty()) {
          throw UsageError("give either --words/--words-file or --pairs-file, not both");
        }
        set = pair_difference_set(store, parse_pairs_csv(read_text_file(a.pairs_file)));
      } else {
        set = get_set(store, word_list(a.words));
      }
      const HeatmapSpec spec = heatmap(distance_matrix(set, metric));
      if (a.svg) {
        sink.write(render_svg(spec, w, h));
      } else {
        sink.write(a.g.json ? emit_json(spec) + '\n' : matrix_text(spec));
      }
    } else if (scatter->parsed() || arrows->parsed()) {
      const EmbeddingSet set = get_set(store, word_list(a.words));
      const PlotSpec spec = scatter->parsed()
                                ? scatter_projection(set, a.x_axis, a.y_axis, store, a.show_axis_point)
                                : arrow_plot(set);
      sink.write(a.svg ? render_svg(spec, w, h) : emit_json(spec) + '\n');
    } else if (pca_cmd->parsed() || mds_cmd->parsed()) {
      const EmbeddingSet set = get_set(store, word_list(a.words));
      const TransformResult r =
          pca_cmd->parsed() ? pca_transform(set, a.k) : mds_transform(set, a.k, metric);
      if (a.svg) {
        sink.write(render_svg(transform_plot(r), w, h));
      } else {
        sink.write(a.g.json ? chart_json_line(to_json(r)) : transform_text(r));
      }
    } else if (debias_cmd->parsed()) {
      const EmbeddingSet set = get_set(store, word_list(a.words));
      const auto pairs = parse_pairs_csv(read_text_file(a.pairs_file));
      const BiasAxis axis = build_bias_axis(store, pairs);
      const EmbeddingSet debiased = debias_set(set, axis);
      std::optional<OverlapReport> report;
      if (!a.report_token.empty()) {
        report = neighborhood_overlap(set, debiased, a.report_token, a.n, metric);
      }
      if (a.g.json) {
        json items = json::array();
        for (const auto& e : debiased) {
          items.push_back({{"name", e.name()},
                           {"derivation", e.expression()},
                           {"vector", e.vector().components()}});
        }
        json pairs_json = json::array();
        for (const auto& [x, y] : axis.source_pairs) pairs_json.push_back({x, y});
        json body = {{"axis",
                      {{"name", axis.axis.name()},
                       {"pairs", pairs_json},
                       {"vector", axis.axis.vector().components()}}},
                     {"items", items}};
        if (report) {
          body["overlap"] = {{"token", report->token}, {"n", report->n},
                             {"before", report->before}, {"after", report->after},
                             {"jaccard", report->jaccard}};
        }
        sink.write(chart_json_line(body));
      } else {
        std::string s = "axis: " + axis.axis.name() + ' ' + vector_head(axis.axis.vector()) + '\n';
        for (const auto& e : debiased) s += e.name() + '\t' + vector_head(e.vector()) + '\n';
        if (report) {
          auto join = [](const std::vector<std::string>& v) {
            std::string j;
            for (const auto& x : v) j += (j.empty() ? "" : ", ") + x;
            return j;
          };
          s += "neighbours before: " + join(report->before) + '\n';
          s += "neighbours after: " + join(report->after) + '\n';
          s += "jaccard: " + fixed(report->jaccard) + '\n';
        }
        sink.write(s);
      }
    } else if (featurize_cmd->parsed()) {
      const auto texts = read_lines(a.texts_file);
      const std::string csv = csv_matrix(featurize(store, texts));
      if (a.out_csv.empty()) {
        sink.write(csv);
      } else {
        Globals to_file = a.g;
        to_file.output = a.out_csv;
        Output(to_file, out).write(csv);
      }
    } else if (convert_cmd->parsed()) {
      if (a.g.output.empty()) throw UsageError("convert needs --output PATH");
      save_store(store, a.g.output, parse_store_format(a.to));
      err << "wrote " << store.size() << " vectors to " << a.g.output << '\n';
    } else if (compare_cmd->parsed()) {
      const auto specs_in = word_list(a.words);
      std::vector<PlotSpec> charts;
      std::vector<std::string> labels;
      for (const auto& s : stores) {
        try {
          charts.push_back(scatter_projection(get_set(s, specs_in), a.x_axis, a.y_axis, s,
                                              a.show_axis_point));
        } catch (const Error& e) {
          throw Error("store \"" + s.label() + "\": " + e.what());
        }
        labels.push_back(s.label());
      }
      if (a.svg) {
        sink.write(render_svg_panels(charts, labels, w, h));
      } else if (a.g.json) {
        json body = json::array();
        for (std::size_t i = 0; i < charts.size(); ++i) {
          body.push_back({{"store", labels[i]}, {"chart", to_json(charts[i])}});
        }
        sink.write(chart_json_line({{"charts", body}}));
      } else {
        std::string s;
        for (std::size_t i = 0; i < charts.size(); ++i) {
          s += "## " + labels[i] + '\n' + plot_text(charts[i]);
        }
        sink.write(s);
      }
    } else if (serve_cmd->parsed()) {
      const server::Api api(std::move(stores));
      server::HttpServer http(api, a.static_dir);
      const int port = http.bind(a.host, a.port);
      err << "listening on http://" << a.host << ':' << port << '\n';
      err.flush();
      http.listen();
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace vecscope::cli
