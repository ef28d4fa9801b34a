#ifndef LR_SURFACE_HPP
#define LR_SURFACE_HPP

// Concrete syntax: lexer, recursive-descent parser and printer for terms and
// types, plus the world and relation literals used by tests and the CLI.

#include "syntax.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lr {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, SourceSpan span, std::vector<std::string> expected = {})
      : std::runtime_error(format(msg, span, expected)), span_(span), expected_(std::move(expected)) {}

  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  static std::string format(const std::string& msg, SourceSpan s, const std::vector<std::string>& exp) {
    std::ostringstream os;
    os << s.line << ':' << s.column << ": " << msg;
    if (!exp.empty()) {
      os << " (expected ";
      for (std::size_t i = 0; i < exp.size(); ++i) os << (i ? ", " : "") << exp[i];
      os << ')';
    }
    return os.str();
  }
  SourceSpan span_;
  std::vector<std::string> expected_;
};

namespace detail {

enum class Tok {
  End, Ident, Int, LocLit,
  // punctuation
  Backslash, TyLambda, Dot, Colon, Comma, LParen, RParen, LAngle, RAngle, LBrack, RBrack,
  LBrace, RBrace, Semi, Tilde, Arrow, Star, Plus, Assign, Eq, Bang, Bar, FatArrow,
  // keywords
  KwTrue, KwFalse, KwIf, KwThen, KwElse, KwFst, KwSnd, KwInl, KwInr, KwAs, KwCase, KwOf,
  KwPack, KwUnpack, KwIn, KwFold, KwUnfold, KwRef, KwNot, KwBool, KwInt, KwRefTy,
  KwAll, KwEx, KwMu
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t number = 0;
  SourceSpan span;
};

inline const char* tokName(Tok t) {
  switch (t) {
  case Tok::End: return "end of input";
  case Tok::Ident: return "identifier";
  case Tok::Int: return "integer";
  case Tok::LocLit: return "location";
  case Tok::Backslash: return "'\\'";
  case Tok::TyLambda: return "'/\\'";
  case Tok::Dot: return "'.'";
  case Tok::Colon: return "':'";
  case Tok::Comma: return "','";
  case Tok::LParen: return "'('";
  case Tok::RParen: return "')'";
  case Tok::LAngle: return "'<'";
  case Tok::RAngle: return "'>'";
  case Tok::LBrack: return "'['";
  case Tok::RBrack: return "']'";
  case Tok::LBrace: return "'{'";
  case Tok::RBrace: return "'}'";
  case Tok::Semi: return "';'";
  case Tok::Tilde: return "'~'";
  case Tok::Arrow: return "'->'";
  case Tok::Star: return "'*'";
  case Tok::Plus: return "'+'";
  case Tok::Assign: return "':='";
  case Tok::Eq: return "'='";
  case Tok::Bang: return "'!'";
  case Tok::Bar: return "'|'";
  case Tok::FatArrow: return "'=>'";
  case Tok::KwTrue: return "'true'";
  case Tok::KwFalse: return "'false'";
  case Tok::KwIf: return "'if'";
  case Tok::KwThen: return "'then'";
  case Tok::KwElse: return "'else'";
  case Tok::KwFst: return "'fst'";
  case Tok::KwSnd: return "'snd'";
  case Tok::KwInl: return "'inl'";
  case Tok::KwInr: return "'inr'";
  case Tok::KwAs: return "'as'";
  case Tok::KwCase: return "'case'";
  case Tok::KwOf: return "'of'";
  case Tok::KwPack: return "'pack'";
  case Tok::KwUnpack: return "'unpack'";
  case Tok::KwIn: return "'in'";
  case Tok::KwFold: return "'fold'";
  case Tok::KwUnfold: return "'unfold'";
  case Tok::KwRef: return "'ref'";
  case Tok::KwNot: return "'not'";
  case Tok::KwBool: return "'Bool'";
  case Tok::KwInt: return "'Int'";
  case Tok::KwRefTy: return "'Ref'";
  case Tok::KwAll: return "'all'";
  case Tok::KwEx: return "'ex'";
  case Tok::KwMu: return "'mu'";
  }
  return "?";
}

inline const std::map<std::string_view, Tok>& keywords() {
  static const std::map<std::string_view, Tok> kw = {
      {"true", Tok::KwTrue}, {"false", Tok::KwFalse}, {"if", Tok::KwIf}, {"then", Tok::KwThen},
      {"else", Tok::KwElse}, {"fst", Tok::KwFst}, {"snd", Tok::KwSnd}, {"inl", Tok::KwInl},
      {"inr", Tok::KwInr}, {"as", Tok::KwAs}, {"case", Tok::KwCase}, {"of", Tok::KwOf},
      {"pack", Tok::KwPack}, {"unpack", Tok::KwUnpack}, {"in", Tok::KwIn}, {"fold", Tok::KwFold},
      {"unfold", Tok::KwUnfold}, {"ref", Tok::KwRef}, {"not", Tok::KwNot}, {"Bool", Tok::KwBool},
      {"Int", Tok::KwInt}, {"Ref", Tok::KwRefTy}, {"all", Tok::KwAll}, {"ex", Tok::KwEx},
      {"mu", Tok::KwMu}};
  return kw;
}

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpace();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) return out;
    }
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') { ++line_; col_ = 1; }
    else ++col_;
    ++pos_;
  }

  void skipSpace() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '-' && peek(1) == '-') {
        while (pos_ < src_.size() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  SourceSpan here() const { return SourceSpan{pos_, pos_, line_, col_}; }

  Token make(Tok k, SourceSpan start, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) advance();
    start.end = pos_;
    return Token{k, std::string(src_.substr(start.begin, len)), 0, start};
  }

  std::int64_t parseNumber(std::string_view digits, SourceSpan sp) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size())
      throw ParseError("integer literal out of range: " + std::string(digits), sp);
    return v;
  }

  Token next() {
    SourceSpan sp = here();
    if (pos_ >= src_.size()) return Token{Tok::End, "", 0, sp};
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      std::size_t len = 1;
      while (std::isdigit(static_cast<unsigned char>(peek(len)))) ++len;
      Token t = make(Tok::Int, sp, len);
      t.number = parseNumber(t.text, t.span);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t len = 1;
      while (std::isalnum(static_cast<unsigned char>(peek(len))) || peek(len) == '_' || peek(len) == '\'') ++len;
      std::string_view word = src_.substr(pos_, len);
      auto it = keywords().find(word);
      return make(it == keywords().end() ? Tok::Ident : it->second, sp, len);
    }
    if (c == '#' && peek(1) == 'l' && std::isdigit(static_cast<unsigned char>(peek(2)))) {
      std::size_t len = 2;
      while (std::isdigit(static_cast<unsigned char>(peek(len)))) ++len;
      Token t = make(Tok::LocLit, sp, len);
      t.number = parseNumber(std::string_view(t.text).substr(2), t.span);
      return t;
    }
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    if (two('/', '\\')) return make(Tok::TyLambda, sp, 2);
    if (two('-', '>')) return make(Tok::Arrow, sp, 2);
    if (two(':', '=')) return make(Tok::Assign, sp, 2);
    if (two('=', '>')) return make(Tok::FatArrow, sp, 2);
    switch (c) {
    case '\\': return make(Tok::Backslash, sp, 1);
    case '.': return make(Tok::Dot, sp, 1);
    case ':': return make(Tok::Colon, sp, 1);
    case ',': return make(Tok::Comma, sp, 1);
    case '(': return make(Tok::LParen, sp, 1);
    case ')': return make(Tok::RParen, sp, 1);
    case '<': return make(Tok::LAngle, sp, 1);
    case '>': return make(Tok::RAngle, sp, 1);
    case '[': return make(Tok::LBrack, sp, 1);
    case ']': return make(Tok::RBrack, sp, 1);
    case '{': return make(Tok::LBrace, sp, 1);
    case '}': return make(Tok::RBrace, sp, 1);
    case ';': return make(Tok::Semi, sp, 1);
    case '~': return make(Tok::Tilde, sp, 1);
    case '*': return make(Tok::Star, sp, 1);
    case '+': return make(Tok::Plus, sp, 1);
    case '=': return make(Tok::Eq, sp, 1);
    case '!': return make(Tok::Bang, sp, 1);
    case '|': return make(Tok::Bar, sp, 1);
    default: break;
    }
    sp.end = sp.begin + 1;
    throw ParseError(std::string("unexpected character '") + c + "'", sp);
  }
};

class Parser {
public:
  explicit Parser(std::string_view src, bool allowLocations = false, bool allowHoles = false)
      : toks_(Lexer(src).run()), allowLocations_(allowLocations), allowHoles_(allowHoles) {}

  TermPtr termToEnd() {
    auto t = expr();
    expect(Tok::End);
    return t;
  }

  TypePtr typeToEnd() {
    auto t = type();
    expect(Tok::End);
    return t;
  }

  std::map<Location, TypePtr> worldToEnd() {
    std::map<Location, TypePtr> w;
    if (at(Tok::Ident) && cur().text == "W") bump();
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      Token l = expect(Tok::LocLit);
      expect(Tok::Colon);
      auto t = type();
      if (!w.emplace(Location(l.number), t).second) throw ParseError("duplicate location in world", l.span);
      if (!at(Tok::Semi)) break;
      bump();
    }
    expect(Tok::RBrace);
    expect(Tok::End);
    return w;
  }

  struct RelLiteral {
    TypePtr left, right;
    std::vector<std::pair<TermPtr, TermPtr>> pairs;
  };

  RelLiteral relToEnd() {
    RelLiteral r;
    if (at(Tok::Ident)) {
      bump();
      expect(Tok::Colon);
      r.left = type();
      expect(Tok::Tilde);
      r.right = type();
    }
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      expect(Tok::LParen);
      auto a = expr();
      expect(Tok::Comma);
      auto b = expr();
      expect(Tok::RParen);
      r.pairs.emplace_back(a, b);
      if (!at(Tok::Semi) && !at(Tok::Comma)) break;
      bump();
    }
    expect(Tok::RBrace);
    expect(Tok::End);
    return r;
  }

private:
  std::vector<Token> toks_;
  bool allowLocations_ = false;
  bool allowHoles_ = false;
  std::size_t i_ = 0;

  bool atHole() const {
    return allowHoles_ && at(Tok::LBrack) && i_ + 1 < toks_.size() && toks_[i_ + 1].kind == Tok::Dot;
  }

  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  Token bump() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = cur();
    if (t.kind == Tok::LocLit && !allowLocations_)
      throw ParseError("location literal '" + t.text + "' is not valid in source programs", t.span, expected);
    throw ParseError("unexpected " + std::string(t.kind == Tok::End ? "end of input" : "'" + t.text + "'"),
                     t.span, std::move(expected));
  }

  Token expect(Tok k) {
    if (!at(k)) fail({tokName(k)});
    return bump();
  }

  Name ident() { return expect(Tok::Ident).text; }

  SourceSpan from(const SourceSpan& start) const {
    SourceSpan s = start;
    s.end = i_ > 0 ? toks_[i_ - 1].span.end : start.end;
    return s;
  }

  TermPtr spanned(TermPtr t, const SourceSpan& start) const {
    Term n = *t;
    n.span = from(start);
    return tm::make(std::move(n));
  }

  // ---- types

  TypePtr type() {
    if (at(Tok::KwAll) || at(Tok::KwEx) || at(Tok::KwMu)) {
      Tok k = bump().kind;
      Name a = ident();
      expect(Tok::Dot);
      auto body = type();
      if (k == Tok::KwAll) return ty::forall(a, body);
      if (k == Tok::KwEx) return ty::exists(a, body);
      return ty::mu(a, body);
    }
    auto lhs = sumType();
    if (at(Tok::Arrow)) {
      bump();
      return ty::arrow(lhs, type());
    }
    return lhs;
  }

  TypePtr sumType() {
    auto lhs = prodType();
    if (at(Tok::Plus)) {
      bump();
      return ty::sum(lhs, sumType());
    }
    return lhs;
  }

  TypePtr prodType() {
    auto lhs = refType();
    if (at(Tok::Star)) {
      bump();
      return ty::prod(lhs, prodType());
    }
    return lhs;
  }

  TypePtr refType() {
    if (at(Tok::KwRefTy)) {
      bump();
      return ty::ref(refType());
    }
    return atomType();
  }

  TypePtr atomType() {
    switch (cur().kind) {
    case Tok::KwBool: bump(); return ty::boolean();
    case Tok::KwInt: bump(); return ty::integer();
    case Tok::Ident: return ty::var(bump().text);
    case Tok::LParen: {
      bump();
      auto t = type();
      expect(Tok::RParen);
      return t;
    }
    default:
      fail({"type"});
    }
  }

  // ---- terms

  TermPtr expr() {
    SourceSpan start = cur().span;
    switch (cur().kind) {
    case Tok::Backslash: {
      bump();
      Name x = ident();
      expect(Tok::Colon);
      auto t = type();
      expect(Tok::Dot);
      return spanned(tm::lam(x, t, expr()), start);
    }
    case Tok::TyLambda: {
      bump();
      Name a = ident();
      expect(Tok::Dot);
      return spanned(tm::tylam(a, expr()), start);
    }
    case Tok::KwIf: {
      bump();
      auto c = expr();
      expect(Tok::KwThen);
      auto t = expr();
      expect(Tok::KwElse);
      return spanned(tm::ite(c, t, expr()), start);
    }
    case Tok::KwCase: {
      bump();
      auto s = expr();
      expect(Tok::KwOf);
      expect(Tok::KwInl);
      Name x = ident();
      expect(Tok::FatArrow);
      auto l = expr();
      expect(Tok::Bar);
      expect(Tok::KwInr);
      Name y = ident();
      expect(Tok::FatArrow);
      return spanned(tm::caseOf(s, x, l, y, expr()), start);
    }
    case Tok::KwUnpack: {
      bump();
      expect(Tok::LAngle);
      Name a = ident();
      expect(Tok::Comma);
      Name x = ident();
      expect(Tok::RAngle);
      expect(Tok::Eq);
      auto packed = expr();
      expect(Tok::KwIn);
      return spanned(tm::unpack(a, x, packed, expr()), start);
    }
    default:
      return assignExpr();
    }
  }

  TermPtr assignExpr() {
    SourceSpan start = cur().span;
    auto lhs = eqExpr();
    if (at(Tok::Assign)) {
      bump();
      return spanned(tm::assign(lhs, expr()), start);
    }
    return lhs;
  }

  TermPtr eqExpr() {
    SourceSpan start = cur().span;
    auto lhs = appExpr();
    while (at(Tok::Eq)) {
      bump();
      lhs = spanned(tm::inteq(lhs, appExpr()), start);
    }
    return lhs;
  }

  bool startsAtom() const {
    switch (cur().kind) {
    case Tok::Ident: case Tok::Int: case Tok::KwTrue: case Tok::KwFalse: case Tok::LParen:
    case Tok::LAngle:
      return true;
    case Tok::LocLit:
      return allowLocations_;
    case Tok::LBrack:
      return atHole();
    default:
      return false;
    }
  }

  TermPtr appExpr() {
    SourceSpan start = cur().span;
    auto f = prefixExpr();
    for (;;) {
      if (at(Tok::LBrack) && !atHole()) {
        bump();
        auto t = type();
        expect(Tok::RBrack);
        f = spanned(tm::tyapp(f, t), start);
      } else if (startsAtom()) {
        f = spanned(tm::app(f, atom()), start);
      } else {
        return f;
      }
    }
  }

  TermPtr prefixExpr() {
    SourceSpan start = cur().span;
    auto operand = [&]() { return startsAtom() ? atom() : prefixExpr(); };
    switch (cur().kind) {
    case Tok::KwFst: bump(); return spanned(tm::fst(operand()), start);
    case Tok::KwSnd: bump(); return spanned(tm::snd(operand()), start);
    case Tok::KwNot: bump(); return spanned(tm::lnot(operand()), start);
    case Tok::KwUnfold: bump(); return spanned(tm::unfold(operand()), start);
    case Tok::KwRef: bump(); return spanned(tm::alloc(operand()), start);
    case Tok::Bang: bump(); return spanned(tm::deref(operand()), start);
    case Tok::KwInl: case Tok::KwInr: case Tok::KwFold: {
      Tok k = bump().kind;
      auto e = appExpr();
      expect(Tok::KwAs);
      auto t = type();
      if (k == Tok::KwInl) return spanned(tm::inl(e, t), start);
      if (k == Tok::KwInr) return spanned(tm::inr(e, t), start);
      return spanned(tm::fold(e, t), start);
    }
    case Tok::KwPack: {
      bump();
      expect(Tok::LAngle);
      auto w = type();
      expect(Tok::Comma);
      auto e = expr();
      expect(Tok::RAngle);
      expect(Tok::KwAs);
      return spanned(tm::pack(w, e, type()), start);
    }
    default:
      if (startsAtom()) return atom();
      fail({"term"});
    }
  }

  TermPtr atom() {
    SourceSpan start = cur().span;
    switch (cur().kind) {
    case Tok::Ident: return spanned(tm::var(bump().text), start);
    case Tok::Int: return spanned(tm::integer(bump().number), start);
    case Tok::KwTrue: bump(); return spanned(tm::tru(), start);
    case Tok::KwFalse: bump(); return spanned(tm::fls(), start);
    case Tok::LocLit:
      if (!allowLocations_) fail({"term"});
      return spanned(tm::loc(Location(bump().number)), start);
    case Tok::LBrack:
      if (!atHole()) fail({"term"});
      bump();
      bump();
      expect(Tok::RBrack);
      return spanned(tm::hole(), start);
    case Tok::LParen: {
      bump();
      auto e = expr();
      expect(Tok::RParen);
      return e;
    }
    case Tok::LAngle: {
      bump();
      auto a = expr();
      expect(Tok::Comma);
      auto b = expr();
      expect(Tok::RAngle);
      return spanned(tm::pair(a, b), start);
    }
    default:
      fail({"identifier", "integer", "'true'", "'false'", "'('", "'<'"});
    }
  }
};

} // namespace detail

inline TermPtr parseTerm(std::string_view text) { return detail::Parser(text).termToEnd(); }
/// Like parseTerm, but accepts `#l<n>` location literals (for API-level checks against a world).
inline TermPtr parseRuntimeTerm(std::string_view text) { return detail::Parser(text, true).termToEnd(); }
/// Parses a program context; `[.]` marks the hole.
inline TermPtr parseContext(std::string_view text) { return detail::Parser(text, false, true).termToEnd(); }
inline TypePtr parseType(std::string_view text) { return detail::Parser(text).typeToEnd(); }

/// `W { #l0 : Bool; #l1 : Int -> Int }`
inline std::map<Location, TypePtr> parseWorld(std::string_view text) { return detail::Parser(text).worldToEnd(); }

using RelLiteral = detail::Parser::RelLiteral;

/// `R : Int ~ Bool { (1, true); (2, false) }`, or the bare `{(1,true)}` form.
inline RelLiteral parseRelLiteral(std::string_view text) { return detail::Parser(text).relToEnd(); }

struct Program {
  TermPtr term;
  LangLevel level = LangLevel::all();
  bool explicitLevel = false;
};

/// Parses a `.lam` file: optional leading `-- level: <name>` pragma, then one term.
inline Program parseProgram(std::string_view text, bool allowLocations = false) {
  Program p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
      continue;
    }
    line = line.substr(first);
    if (line.substr(0, 2) != "--") break;
    auto body = line.substr(2);
    auto b = body.find_first_not_of(" \t");
    if (b != std::string_view::npos && body.substr(b, 6) == "level:") {
      std::string name(body.substr(b + 6));
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t\r") + 1);
      p.level = LangLevel::parse(name);
      p.explicitLevel = true;
      break;
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  p.term = allowLocations ? parseRuntimeTerm(text) : parseTerm(text);
  if (!levelCheck(p.term, p.level))
    throw ParseError("program uses constructs outside language level " + p.level.toString(), p.term->span);
  return p;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void printType(std::ostream& os, const TypePtr& t, int prec) {
  int own = 5;
  switch (t->kind) {
  case TypeKind::Forall: case TypeKind::Exists: case TypeKind::Mu: own = 0; break;
  case TypeKind::Arrow: own = 1; break;
  case TypeKind::Sum: own = 2; break;
  case TypeKind::Prod: own = 3; break;
  case TypeKind::Ref: own = 4; break;
  default: break;
  }
  bool paren = own < prec;
  if (paren) os << '(';
  switch (t->kind) {
  case TypeKind::Bool: os << "Bool"; break;
  case TypeKind::Int: os << "Int"; break;
  case TypeKind::Var: os << t->name; break;
  case TypeKind::Forall: case TypeKind::Exists: case TypeKind::Mu:
    os << (t->kind == TypeKind::Forall ? "all " : t->kind == TypeKind::Exists ? "ex " : "mu ") << t->name << ". ";
    printType(os, t->left, 0);
    break;
  case TypeKind::Arrow:
    printType(os, t->left, 2); os << " -> "; printType(os, t->right, 1);
    break;
  case TypeKind::Sum:
    printType(os, t->left, 3); os << " + "; printType(os, t->right, 2);
    break;
  case TypeKind::Prod:
    printType(os, t->left, 4); os << " * "; printType(os, t->right, 3);
    break;
  case TypeKind::Ref:
    os << "Ref "; printType(os, t->left, 4);
    break;
  }
  if (paren) os << ')';
}

// Term precedence: 0 binder forms, 1 :=, 2 =, 3 application, 4 prefix, 5 atom.
inline int termPrec(const TermPtr& e) {
  switch (e->kind) {
  case TermKind::Lam: case TermKind::TyLam: case TermKind::If: case TermKind::Case:
  case TermKind::Unpack:
    return 0;
  case TermKind::Assign: return 1;
  case TermKind::IntEq: return 2;
  case TermKind::App: case TermKind::TyApp: return 3;
  case TermKind::Fst: case TermKind::Snd: case TermKind::Not: case TermKind::Unfold:
  case TermKind::Alloc: case TermKind::Deref: case TermKind::Inl: case TermKind::Inr:
  case TermKind::Fold: case TermKind::Pack:
    return 4;
  default: return 5;
  }
}

using LocPrinter = std::function<std::string(Location)>;

inline void printTerm(std::ostream& os, const TermPtr& e, int prec, const LocPrinter* lp);

// Operand of application, type application, or a prefix operator: only
// applications and atoms go unparenthesized in function position.
inline void printHead(std::ostream& os, const TermPtr& e, const LocPrinter* lp) {
  int p = termPrec(e);
  printTerm(os, e, p == 3 ? 3 : 5, lp);
}

inline void printTerm(std::ostream& os, const TermPtr& e, int prec, const LocPrinter* lp) {
  bool paren = termPrec(e) < prec;
  if (paren) os << '(';
  switch (e->kind) {
  case TermKind::Var: os << e->name; break;
  case TermKind::True: os << "true"; break;
  case TermKind::False: os << "false"; break;
  case TermKind::Int: os << e->number; break;
  case TermKind::Hole: os << "[.]"; break;
  case TermKind::Loc:
    os << (lp ? (*lp)(e->loc) : "#l" + std::to_string(e->loc));
    break;
  case TermKind::If:
    os << "if "; printTerm(os, e->a, 0, lp);
    os << " then "; printTerm(os, e->b, 0, lp);
    os << " else "; printTerm(os, e->c, 0, lp);
    break;
  case TermKind::Lam:
    os << '\\' << e->name << ": "; printType(os, e->type, 0);
    os << ". "; printTerm(os, e->a, 0, lp);
    break;
  case TermKind::TyLam:
    os << "/\\" << e->name << ". "; printTerm(os, e->a, 0, lp);
    break;
  case TermKind::Case:
    os << "case "; printTerm(os, e->a, 0, lp);
    os << " of inl " << e->name << " => "; printTerm(os, e->b, 0, lp);
    os << " | inr " << e->name2 << " => "; printTerm(os, e->c, 0, lp);
    break;
  case TermKind::Unpack:
    os << "unpack <" << e->name << ", " << e->name2 << "> = "; printTerm(os, e->a, 0, lp);
    os << " in "; printTerm(os, e->b, 0, lp);
    break;
  case TermKind::Assign:
    printTerm(os, e->a, 2, lp); os << " := "; printTerm(os, e->b, 1, lp);
    break;
  case TermKind::IntEq:
    printTerm(os, e->a, 2, lp); os << " = "; printTerm(os, e->b, 3, lp);
    break;
  case TermKind::App:
    printHead(os, e->a, lp); os << ' '; printTerm(os, e->b, 5, lp);
    break;
  case TermKind::TyApp:
    printHead(os, e->a, lp); os << " ["; printType(os, e->type, 0); os << ']';
    break;
  case TermKind::Fst: case TermKind::Snd: case TermKind::Not: case TermKind::Unfold:
  case TermKind::Alloc: case TermKind::Deref: {
    const char* op = e->kind == TermKind::Fst ? "fst " : e->kind == TermKind::Snd ? "snd "
                   : e->kind == TermKind::Not ? "not " : e->kind == TermKind::Unfold ? "unfold "
                   : e->kind == TermKind::Alloc ? "ref " : "!";
    os << op;
    int p = termPrec(e->a);
    // prefix operators chain (`not not x`); the trailing-type forms need parens
    bool chain = p == 4 && e->a->kind != TermKind::Inl && e->a->kind != TermKind::Inr &&
                 e->a->kind != TermKind::Fold && e->a->kind != TermKind::Pack;
    printTerm(os, e->a, chain ? 4 : 5, lp);
    break;
  }
  case TermKind::Inl: case TermKind::Inr: case TermKind::Fold:
    os << (e->kind == TermKind::Inl ? "inl " : e->kind == TermKind::Inr ? "inr " : "fold ");
    printTerm(os, e->a, 3, lp);
    os << " as "; printType(os, e->type, 0);
    break;
  case TermKind::Pack:
    os << "pack <"; printType(os, e->type, 0); os << ", "; printTerm(os, e->a, 0, lp);
    os << "> as "; printType(os, e->type2, 0);
    break;
  case TermKind::Pair:
    os << '<'; printTerm(os, e->a, 0, lp); os << ", "; printTerm(os, e->b, 0, lp); os << '>';
    break;
  }
  if (paren) os << ')';
}

} // namespace detail

inline std::string printType(const TypePtr& t) {
  std::ostringstream os;
  detail::printType(os, t, 0);
  return os.str();
}

inline std::string printTerm(const TermPtr& e) {
  std::ostringstream os;
  detail::printTerm(os, e, 0, nullptr);
  return os.str();
}

/// Prints with a custom rendering for location nodes (e.g. allocation order).
inline std::string printTerm(const TermPtr& e, const std::function<std::string(Location)>& locName) {
  std::ostringstream os;
  detail::printTerm(os, e, 0, &locName);
  return os.str();
}

inline std::string printWorld(const std::map<Location, TypePtr>& w) {
  std::string out = "W {";
  bool first = true;
  for (auto& [l, t] : w) {
    out += first ? " " : "; ";
    first = false;
    out += "#l" + std::to_string(l) + " : " + printType(t);
  }
  return out + (first ? "}" : " }");
}

} // namespace lr

#endif
