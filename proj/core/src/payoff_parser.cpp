#include <cctype>
#include <string>

#include "rip/errors.hpp"
#include "rip/payoff.hpp"

namespace rip {

namespace {

enum class Tok {
  kNumber,
  kIdent,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kCompare,
  kEnd
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::kEnd, "", line, col};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(line, col);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        s += advance();
      }
      return {Tok::kIdent, s, line, col};
    }
    advance();
    switch (c) {
      case '(': return {Tok::kLParen, "(", line, col};
      case ')': return {Tok::kRParen, ")", line, col};
      case '[': return {Tok::kLBracket, "[", line, col};
      case ']': return {Tok::kRBracket, "]", line, col};
      case ',': return {Tok::kComma, ",", line, col};
      case '+': return {Tok::kPlus, "+", line, col};
      case '-': return {Tok::kMinus, "-", line, col};
      case '*': return {Tok::kStar, "*", line, col};
      case '/': return {Tok::kSlash, "/", line, col};
      case '<':
      case '>':
        if (peek() == '=') {
          advance();
          return {Tok::kCompare, std::string(1, c) + "=", line, col};
        }
        return {Tok::kCompare, std::string(1, c), line, col};
      case '=':
        if (peek() == '=') {
          advance();
          return {Tok::kCompare, "==", line, col};
        }
        break;
      default:
        break;
    }
    throw ParseError("unexpected character", line, col, std::string(1, c));
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  bool digit_at(std::size_t p) const {
    return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
  }

  Token number(int line, int col) {
    std::string s;
    while (digit_at(pos_)) s += advance();
    if (peek() == '.') {
      s += advance();
      while (digit_at(pos_)) s += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (digit_at(p)) {
        while (pos_ < p) s += advance();
        while (digit_at(pos_)) s += advance();
      }
    }
    // "4/9" with no spaces is a single exact literal.
    if (peek() == '/' && digit_at(pos_ + 1) && s.find_first_of(".eE") == std::string::npos) {
      s += advance();
      while (digit_at(pos_)) s += advance();
    }
    if (s == ".") throw ParseError("malformed number", line, col, s);
    return {Tok::kNumber, s, line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  PayoffExpr parse_all() {
    PayoffExpr e = expr();
    if (cur_.kind != Tok::kEnd) fail("unexpected token");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur_.line, cur_.column, cur_.kind == Tok::kEnd ? "<end>" : cur_.text);
  }

  Token take() {
    Token t = cur_;
    cur_ = lex_.next();
    return t;
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    take();
  }

  PayoffExpr expr() {
    PayoffExpr e = term();
    while (cur_.kind == Tok::kPlus || cur_.kind == Tok::kMinus) {
      const bool plus = take().kind == Tok::kPlus;
      PayoffExpr r = term();
      e = plus ? e + r : e - r;
    }
    return e;
  }

  PayoffExpr term() {
    PayoffExpr e = factor();
    while (cur_.kind == Tok::kStar || cur_.kind == Tok::kSlash) {
      const bool mul = take().kind == Tok::kStar;
      PayoffExpr r = factor();
      e = mul ? e * r : e / r;
    }
    return e;
  }

  PayoffExpr factor() {
    switch (cur_.kind) {
      case Tok::kNumber: return PayoffExpr::constant(number(take()));
      case Tok::kMinus: {
        take();
        if (cur_.kind == Tok::kNumber) return PayoffExpr::constant(-number(take()));
        return -factor();
      }
      case Tok::kLParen: {
        take();
        PayoffExpr e = expr();
        expect(Tok::kRParen, "')'");
        return e;
      }
      case Tok::kIdent: return ident();
      default: fail("expected an expression");
    }
  }

  Rational number(const Token& t) {
    try {
      return parse_rational(t.text);
    } catch (const Error&) {
      throw ParseError("malformed number", t.line, t.column, t.text);
    }
  }

  int integer(const char* what) {
    if (cur_.kind != Tok::kNumber ||
        cur_.text.find_first_not_of("0123456789") != std::string::npos) {
      fail(std::string("expected ") + what);
    }
    try {
      return std::stoi(take().text);
    } catch (const std::exception&) {
      fail(std::string("integer out of range for ") + what);
    }
  }

  GridIndex grid_index() {
    if (cur_.kind == Tok::kIdent && cur_.text == "T") {
      take();
      return GridIndex::end();
    }
    return GridIndex::at(integer("grid index"));
  }

  PayoffExpr ident() {
    const Token id = take();
    if (id.text == "S") {
      expect(Tok::kLBracket, "'['");
      const int asset = integer("asset index");
      if (asset < 1) throw ParseError("asset index must be >= 1", id.line, id.column, id.text);
      expect(Tok::kComma, "','");
      const GridIndex k = grid_index();
      expect(Tok::kRBracket, "']'");
      return PayoffExpr::price(asset, k);
    }
    if (id.text == "maxt" || id.text == "mint") {
      expect(Tok::kLParen, "'('");
      const int asset = integer("asset index");
      GridIndex from = GridIndex::at(0), to = GridIndex::end();
      bool windowed = false;
      if (cur_.kind == Tok::kComma) {
        take();
        from = grid_index();
        expect(Tok::kComma, "','");
        to = grid_index();
        windowed = true;
      }
      expect(Tok::kRParen, "')'");
      PayoffExpr::RunningExtreme node{id.text == "maxt", asset, from, to, windowed};
      return PayoffExpr(std::make_shared<const PayoffExpr::Node>(PayoffExpr::Node{node}));
    }
    if (id.text == "ind") {
      expect(Tok::kLParen, "'('");
      PayoffExpr lhs = expr();
      if (cur_.kind != Tok::kCompare) fail("expected a comparison inside ind()");
      const std::string op = take().text;
      PayoffExpr rhs = expr();
      expect(Tok::kRParen, "')'");
      CompareOp cmp = op == "<"    ? CompareOp::kLess
                      : op == "<=" ? CompareOp::kLessEqual
                      : op == ">"  ? CompareOp::kGreater
                      : op == ">=" ? CompareOp::kGreaterEqual
                                   : CompareOp::kEqual;
      return PayoffExpr::indicator(cmp, lhs, rhs);
    }
    Function fn;
    std::size_t min_args = 1, max_args = 1;
    if (id.text == "max" || id.text == "min") {
      fn = id.text == "max" ? Function::kMax : Function::kMin;
      max_args = static_cast<std::size_t>(-1);
    } else if (id.text == "abs") {
      fn = Function::kAbs;
    } else if (id.text == "pos") {
      fn = Function::kPos;
    } else if (id.text == "nrat") {
      fn = Function::kNRat;
      min_args = max_args = 2;
    } else {
      throw ParseError("unknown identifier", id.line, id.column, id.text);
    }
    expect(Tok::kLParen, "'('");
    std::vector<PayoffExpr> args;
    if (cur_.kind != Tok::kRParen) {
      args.push_back(expr());
      while (cur_.kind == Tok::kComma) {
        take();
        args.push_back(expr());
      }
    }
    if (args.size() < min_args || args.size() > max_args) {
      throw ParseError("wrong number of arguments", id.line, id.column, id.text);
    }
    expect(Tok::kRParen, "')'");
    return PayoffExpr::call(fn, std::move(args));
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

PayoffExpr parse_payoff(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace rip
