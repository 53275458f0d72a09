#include "vecscope/expr.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "vecscope/error.hpp"
#include "vecscope/text.hpp"

namespace vecscope {

Expr::Expr(Kind kind, std::string text, std::shared_ptr<const Expr> lhs,
           std::shared_ptr<const Expr> rhs)
    : kind_(kind), text_(std::move(text)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

Expr Expr::word(std::string token) { return Expr(Kind::kWord, std::move(token), nullptr, nullptr); }

Expr Expr::phrase(std::string text) {
  return Expr(Kind::kPhrase, std::move(text), nullptr, nullptr);
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  return Expr(kind, {}, std::make_shared<const Expr>(std::move(lhs)),
              std::make_shared<const Expr>(std::move(rhs)));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.is_leaf()) return a.text_ == b.text_;
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

namespace {

bool is_operator_char(char c) {
  return c == '(' || c == ')' || c == '+' || c == '-' || c == '|' || c == '"';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError("unbalanced parentheses: unmatched ')'", pos_);
      throw ParseError("unexpected " + describe_here(), pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (std::size_t ws = text::whitespace_length(text_, pos_)) pos_ += ws;
  }

  std::optional<char> peek_op() {
    skip_space();
    if (pos_ >= text_.size()) return std::nullopt;
    return text_[pos_];
  }

  std::string describe_here() const {
    if (pos_ >= text_.size()) return "end of input";
    if (is_operator_char(text_[pos_])) return std::string("'") + text_[pos_] + "'";
    std::size_t end = pos_;
    while (end < text_.size() && !is_operator_char(text_[end]) &&
           text::whitespace_length(text_, end) == 0) {
      ++end;
    }
    return "word '" + std::string(text_.substr(pos_, end - pos_)) + "'";
  }

  Expr parse_expr() {
    Expr lhs = parse_sum();
    while (peek_op() == '|') {
      ++pos_;
      lhs = Expr::binary(Expr::Kind::kReject, std::move(lhs), parse_sum());
    }
    return lhs;
  }

  Expr parse_sum() {
    Expr lhs = parse_atom();
    for (auto op = peek_op(); op == '+' || op == '-'; op = peek_op()) {
      ++pos_;
      const auto kind = *op == '+' ? Expr::Kind::kAdd : Expr::Kind::kSub;
      lhs = Expr::binary(kind, std::move(lhs), parse_atom());
    }
    return lhs;
  }

  Expr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError("expected a word, phrase or '(' but reached end of input", pos_);
    }
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      if (peek_op() == ')') throw ParseError("empty parentheses", pos_);
      Expr inner = parse_expr();
      if (peek_op() != ')') {
        if (pos_ >= text_.size()) {
          throw ParseError("unbalanced parentheses: '(' at offset " + std::to_string(open) +
                               " is never closed",
                           pos_);
        }
        throw ParseError("expected ')' but found " + describe_here(), pos_);
      }
      ++pos_;
      return inner;
    }
    if (c == '"') {
      const std::size_t open = pos_;
      const std::size_t close = text_.find('"', open + 1);
      if (close == std::string_view::npos) {
        throw ParseError("unterminated phrase quote", open);
      }
      std::string_view body = text::trim(text_.substr(open + 1, close - open - 1));
      if (body.empty()) throw ParseError("empty phrase", open);
      pos_ = close + 1;
      return Expr::phrase(std::string(body));
    }
    if (is_operator_char(c)) {
      if (c == ')') throw ParseError("expected a word, phrase or '(' but found ')'", pos_);
      throw ParseError("expected a word, phrase or '(' but found " + describe_here(), pos_);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_operator_char(text_[pos_]) &&
           text::whitespace_length(text_, pos_) == 0) {
      ++pos_;
    }
    // A word directly followed by another word is not an operator sequence.
    std::size_t after = pos_;
    while (std::size_t ws = text::whitespace_length(text_, after)) after += ws;
    if (after < text_.size() && !is_operator_char(text_[after])) {
      pos_ = after;
      throw ParseError("unexpected " + describe_here() +
                           " (quote multi-word phrases: \"like this\")",
                       after);
    }
    return Expr::word(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view kind_symbol(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kAdd: return "+";
    case Expr::Kind::kSub: return "-";
    case Expr::Kind::kReject: return "|";
    default: return "";
  }
}

void collect_tokens(const Expr& e, std::vector<std::string>& out,
                    std::unordered_set<std::string>& seen) {
  if (e.kind() == Expr::Kind::kWord) {
    if (seen.insert(e.text()).second) out.push_back(e.text());
  } else if (e.kind() == Expr::Kind::kPhrase) {
    for (auto& t : text::split_whitespace(e.text())) {
      if (seen.insert(t).second) out.push_back(std::move(t));
    }
  } else {
    collect_tokens(e.lhs(), out, seen);
    collect_tokens(e.rhs(), out, seen);
  }
}

Vector eval_vector(const Expr& e, const VectorStore& store) {
  switch (e.kind()) {
    case Expr::Kind::kWord: return lookup(store, e.text()).vector();
    case Expr::Kind::kPhrase: return embed_phrase(store, e.text()).vector();
    case Expr::Kind::kAdd: return eval_vector(e.lhs(), store) + eval_vector(e.rhs(), store);
    case Expr::Kind::kSub: return eval_vector(e.lhs(), store) - eval_vector(e.rhs(), store);
    case Expr::Kind::kReject: {
      Embedding a("lhs", eval_vector(e.lhs(), store));
      Embedding b(render(e.rhs()), eval_vector(e.rhs(), store));
      return reject(a, b).vector();
    }
  }
  return {};
}

Embedding combine(const Embedding& a, SetOp op, const Embedding& b) {
  switch (op) {
    case SetOp::kAdd:
      return Embedding("(" + a.name() + " + " + b.name() + ")", a.vector() + b.vector(),
                       "(" + a.expression() + " + " + b.expression() + ")");
    case SetOp::kSub:
      return Embedding("(" + a.name() + " - " + b.name() + ")", a.vector() - b.vector(),
                       "(" + a.expression() + " - " + b.expression() + ")");
    case SetOp::kReject: return reject(a, b);
  }
  throw InvalidArgument("unknown set operation");
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string render(const Expr& expr) {
  switch (expr.kind()) {
    case Expr::Kind::kWord: return expr.text();
    case Expr::Kind::kPhrase: return '"' + expr.text() + '"';
    default:
      return "(" + render(expr.lhs()) + " " + std::string(kind_symbol(expr.kind())) + " " +
             render(expr.rhs()) + ")";
  }
}

std::vector<std::string> leaf_tokens(const Expr& expr) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  collect_tokens(expr, out, seen);
  return out;
}

Embedding evaluate(const Expr& expr, const VectorStore& store) {
  std::vector<std::string> missing;
  for (auto& token : leaf_tokens(expr)) {
    if (!store.contains(token)) missing.push_back(std::move(token));
  }
  if (!missing.empty()) throw OovError(std::move(missing));

  if (expr.kind() == Expr::Kind::kWord) return lookup(store, expr.text());
  if (expr.kind() == Expr::Kind::kPhrase) return embed_phrase(store, expr.text());
  std::string rendered = render(expr);
  return Embedding(rendered, eval_vector(expr, store), rendered);
}

std::string_view symbol(SetOp op) {
  switch (op) {
    case SetOp::kAdd: return "+";
    case SetOp::kSub: return "-";
    case SetOp::kReject: return "|";
  }
  return "";
}

Embedding reject(const Embedding& a, const Embedding& b) {
  require_same_dim(a.dim(), b.dim(), "rejection");
  const double bb = squared_norm(b.vector().span());
  if (bb == 0.0) {
    throw ZeroAxisError("cannot project away from zero-length axis \"" + b.name() + '"');
  }
  const double coeff = dot(a.vector().span(), b.vector().span()) / bb;
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.vector()[i] - coeff * b.vector()[i];
  return Embedding("(" + a.name() + " | " + b.name() + ")", Vector(std::move(out)),
                   "(" + a.expression() + " | " + b.expression() + ")");
}

double projection_coefficient(const Embedding& a, const Embedding& axis) {
  require_same_dim(a.dim(), axis.dim(), "projection");
  const double aa = squared_norm(axis.vector().span());
  if (aa == 0.0) {
    throw ZeroAxisError("cannot project onto zero-length axis \"" + axis.name() + '"');
  }
  return dot(a.vector().span(), axis.vector().span()) / aa;
}

EmbeddingSet set_apply(const EmbeddingSet& set, SetOp op, const Embedding& rhs) {
  if (!set.empty()) require_same_dim(set.dim(), rhs.dim(), "set operation");
  EmbeddingSet out;
  for (const auto& member : set) out.add(combine(member, op, rhs));
  return out;
}

Vector running_mean(std::span<const Vector> vectors) {
  if (vectors.empty()) throw InvalidArgument("cannot average an empty list");
  std::vector<double> mean = vectors.front().components();
  for (std::size_t k = 1; k < vectors.size(); ++k) {
    require_same_dim(mean.size(), vectors[k].dim(), "mean");
    const double count = static_cast<double>(k + 1);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (vectors[k][i] - mean[i]) / count;
  }
  return Vector(std::move(mean));
}

Embedding average(const EmbeddingSet& set) {
  if (set.empty()) throw InvalidArgument("cannot average an empty set");
  std::vector<Vector> vectors;
  vectors.reserve(set.size());
  for (const auto& e : set) vectors.push_back(e.vector());
  return Embedding("average(" + std::to_string(set.size()) + ")", running_mean(vectors));
}

}  // namespace vecscope
