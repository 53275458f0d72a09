#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecscope/embedding.hpp"
#include "vecscope/vecstore.hpp"

namespace vecscope {

// Immutable expression tree over tokens and quoted phrases.
//
//   expr := sum ('|' sum)*            rejection, lowest precedence, left-assoc
//   sum  := atom (('+' | '-') atom)*  left-assoc
//   atom := WORD | '"' PHRASE '"' | '(' expr ')'
//
// WORD is a maximal run of non-whitespace bytes other than ( ) + - | ".
class Expr {
 public:
  enum class Kind { kWord, kPhrase, kAdd, kSub, kReject };

  static Expr word(std::string token);
  static Expr phrase(std::string text);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);

  Kind kind() const { return kind_; }
  bool is_leaf() const { return kind_ == Kind::kWord || kind_ == Kind::kPhrase; }
  // Token or phrase text; empty for binary nodes.
  const std::string& text() const { return text_; }
  const Expr& lhs() const { return *lhs_; }
  const Expr& rhs() const { return *rhs_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  Expr(Kind kind, std::string text, std::shared_ptr<const Expr> lhs,
       std::shared_ptr<const Expr> rhs);

  Kind kind_;
  std::string text_;
  std::shared_ptr<const Expr> lhs_;
  std::shared_ptr<const Expr> rhs_;
};

// Throws ParseError carrying the byte offset of the failure.
Expr parse(std::string_view text);

// Fully parenthesised infix, e.g. "((king - man) + woman)". Phrases are
// quoted. parse(render(e)) == e.
std::string render(const Expr& expr);

// Every token the expression reads from a store: words plus the tokens of
// each phrase, in left-to-right order, without duplicates.
std::vector<std::string> leaf_tokens(const Expr& expr);

// Leaves resolve via lookup / embed_phrase. A binary result is named by its
// rendering and carries the same string as derivation.
Embedding evaluate(const Expr& expr, const VectorStore& store);

enum class SetOp { kAdd, kSub, kReject };

std::string_view symbol(SetOp op);

// a - (a.b / b.b) b. Throws ZeroAxisError when b is the zero vector.
Embedding reject(const Embedding& a, const Embedding& b);

// (a.axis) / (axis.axis).
double projection_coefficient(const Embedding& a, const Embedding& axis);

EmbeddingSet set_apply(const EmbeddingSet& set, SetOp op, const Embedding& rhs);

// Componentwise running mean: m += (x - m) / count. Identical inputs yield
// exactly that input. Throws InvalidArgument on an empty list.
Vector running_mean(std::span<const Vector> vectors);

// Componentwise mean, named "average(<k>)". A running mean is used so k
// identical members average to that member exactly.
Embedding average(const EmbeddingSet& set);

}  // namespace vecscope
