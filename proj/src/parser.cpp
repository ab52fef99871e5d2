#include "delin/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "delin/errors.hpp"

namespace delin {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End } kind = Kind::End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    skip();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        t.text += advance();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) t.text += advance();
    } else if (std::string("+-*/^()[],;=>").find(c) != std::string::npos) {
      t.kind = Token::Kind::Punct;
      t.text = advance();
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    return t;
  }

 private:
  char advance() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, VarSpace* vs) : lex_(text), vs_(vs) { tok_ = lex_.next(); }

  SystemFile file() {
    SystemFile f;
    while (tok_.kind != Token::Kind::End) {
      Token kw = expectIdent("a statement keyword");
      const std::string& k = kw.text;
      if (k == "indep") {
        for (auto& n : names()) declare(n, kw, [&] { vs_->addIndep(n); });
      } else if (k == "dep") {
        for (auto& n : names()) declare(n, kw, [&] { vs_->addDep(n); });
      } else if (k == "param") {
        for (auto& n : names()) declare(n, kw, [&] { vs_->addParam(n); });
      } else if (k == "func") {
        Token name = expectIdent("a function name");
        expect("(");
        std::vector<std::string> args;
        while (!accept(")")) {
          Token a = expectIdent("an argument name");
          auto r = vs_->role(a.text);
          if (r != VarSpace::Role::Indep && r != VarSpace::Role::Dep)
            throw UndeclaredName(a.text + " is not an independent or dependent variable (line " +
                                 std::to_string(a.line) + ")");
          args.push_back(a.text);
          accept(",");
        }
        declare(name.text, name, [&] { vs_->addFunc({name.text, args}); });
      } else if (k == "aux") {
        Token name = expectIdent("an auxiliary name");
        expect("=");
        Token fn = expectIdent("exp");
        if (fn.text != "exp") throw ParseError("only exp(...) auxiliaries are supported", fn.line, fn.col);
        expect("(");
        Expr arg = expr();
        expect(")");
        AuxSym a{name.text, {}};
        Var w = Var::symbol(name.text);
        for (Var v : arg.vars()) {
          auto r = vs_->role(v.name());
          if (r == VarSpace::Role::Param) continue;
          if (r == VarSpace::Role::Indep || (r == VarSpace::Role::Dep && v.isDeriv() && v.order() == 0))
            a.partials.push_back({v, arg.diff(v) * Expr(w)});
          else
            throw ParseError("exp argument may only involve variables and parameters", fn.line, fn.col);
        }
        declare(name.text, name, [&] { vs_->addAux(a); });
        f.aux.push_back({name.text, arg});
      } else if (k == "eq") {
        Expr l = expr();
        if (accept("=")) l = l - expr();
        f.dps.eqs.push_back(l);
      } else if (k == "ineq") {
        f.dps.ineqs.push_back(expr());
      } else if (k == "point") {
        Point p;
        do {
          Token n = expectIdent("a variable name");
          expect("=");
          Expr v = expr();
          if (!v.vars().empty()) throw ParseError("point coordinates must be numbers", n.line, n.col);
          p[atomFor(n)] = evaluate(v, Point{});
        } while (accept(","));
        f.point = p;
      } else if (k == "ranking") {
        f.ranking.clear();
        if (tok_.kind == Token::Kind::Ident && tok_.text == "orderly") {
          expectIdent("orderly");
        } else {
          do {
            std::vector<std::string> block;
            do {
              Token n = expectIdent("a dependent variable");
              if (vs_->role(n.text) != VarSpace::Role::Dep)
                throw ParseError("'" + n.text + "' is not a dependent variable", n.line, n.col);
              block.push_back(n.text);
            } while (accept(","));
            f.ranking.push_back(block);
          } while (accept(">"));
        }
      } else if (k == "option") {
        Token n = expectIdent("an option name");
        expect("=");
        int v = expectInt();
        if (n.text == "casesplit")
          f.options.casesplit = v != 0;
        else if (n.text == "order")
          f.options.extraOrder = v;
        else if (n.text == "cases")
          f.options.maxCases = v;
        else
          throw ParseError("unknown option '" + n.text + "'", n.line, n.col);
      } else if (k == "map") {
        do {
          Token n = expectIdent("a target variable name");
          expect("=");
          f.map.push_back({n.text, expr()});
        } while (accept(","));
      } else {
        throw ParseError("unknown keyword '" + k + "'", kw.line, kw.col);
      }
      expect(";");
    }
    f.dps.vs = *vs_;
    f.dps.vs.validate();
    return f;
  }

  Expr exprOnly() {
    Expr e = expr();
    if (tok_.kind != Token::Kind::End) fail("end of expression");
    return e;
  }

 private:
  template <class F>
  void declare(const std::string& n, const Token& at, F add) {
    if (vs_->declared(n)) throw ParseError("'" + n + "' declared twice", at.line, at.col);
    if (n == "diff" || n == "exp") throw ParseError("'" + n + "' is reserved", at.line, at.col);
    add();
  }

  std::vector<std::string> names() {
    std::vector<std::string> r;
    do r.push_back(expectIdent("a name").text);
    while (accept(",") || tok_.kind == Token::Kind::Ident);
    return r;
  }

  [[noreturn]] void fail(const std::string& wanted) {
    std::string got = tok_.kind == Token::Kind::End ? "end of input" : "'" + tok_.text + "'";
    throw ParseError("expected " + wanted + ", got " + got, tok_.line, tok_.col);
  }
  bool accept(const char* p) {
    if (tok_.kind == Token::Kind::Punct && tok_.text == p) {
      tok_ = lex_.next();
      return true;
    }
    return false;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(std::string("'") + p + "'");
  }
  Token expectIdent(const std::string& what) {
    if (tok_.kind != Token::Kind::Ident) fail(what);
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }
  int expectInt() {
    if (tok_.kind != Token::Kind::Number) fail("an integer");
    Token t = tok_;
    tok_ = lex_.next();
    if (t.text.size() > 3) throw ParseError("integer too large here", t.line, t.col);
    return std::stoi(t.text);
  }

  Var atomFor(const Token& t) {
    auto r = vs_->role(t.text);
    switch (r) {
      case VarSpace::Role::Indep:
      case VarSpace::Role::Param:
      case VarSpace::Role::Aux:
        return Var::symbol(t.text);
      case VarSpace::Role::Dep:
      case VarSpace::Role::Func:
        return Var::deriv(t.text, {});
      case VarSpace::Role::None:
        break;
    }
    throw UndeclaredName("'" + t.text + "' at line " + std::to_string(t.line) + ", column " + std::to_string(t.col));
  }

  // Derivative of an unknown w.r.t. named arguments.
  Var derivative(const Token& base, const std::vector<std::pair<Token, int>>& wrt) {
    Var v = atomFor(base);
    if (!v.isDeriv()) throw ParseError("'" + base.text + "' cannot be differentiated", base.line, base.col);
    const auto& args = vs_->argsOf(v.name());
    MultiIndex a{};
    for (const auto& [t, k] : wrt) {
      auto it = std::find(args.begin(), args.end(), t.text);
      if (it == args.end())
        throw ParseError("'" + base.text + "' does not depend on '" + t.text + "'", t.line, t.col);
      int pos = int(it - args.begin());
      if (a[pos] + k > 255) throw ParseError("derivative order too large", t.line, t.col);
      a[pos] = std::uint8_t(a[pos] + k);
    }
    return v.withIndex(a);
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept("+"))
        e = e + term();
      else if (accept("-"))
        e = e - term();
      else
        return e;
    }
  }
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept("*")) {
        e = e * unary();
      } else if (tok_.kind == Token::Kind::Punct && tok_.text == "/") {
        Token at = tok_;
        accept("/");
        Expr d = unary();
        if (d.isZero()) throw ParseError("division by zero", at.line, at.col);
        e = e / d;
      } else {
        return e;
      }
    }
  }
  Expr unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }
  Expr power() {
    Expr b = atom();
    if (!accept("^")) return b;
    bool neg = accept("-");
    Token at = tok_;
    int k = expectInt();
    if (!neg) return b.pow(k);
    if (b.isZero()) throw ParseError("division by zero", at.line, at.col);
    return Expr(1L) / b.pow(k);
  }
  Expr atom() {
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (tok_.kind == Token::Kind::Number) {
      Token t = tok_;
      tok_ = lex_.next();
      return Expr(mpq_class(mpz_class(t.text)));
    }
    Token id = expectIdent("an expression");
    if (id.text == "diff") {
      expect("(");
      Token base = expectIdent("a dependent variable or function");
      std::vector<std::pair<Token, int>> wrt;
      while (accept(",")) {
        if (tok_.kind == Token::Kind::Number) {
          if (wrt.empty()) fail("a variable name");
          Token at = tok_;
          int k = expectInt();
          if (k < 1) throw ParseError("derivative count must be positive", at.line, at.col);
          wrt.back().second += k - 1;
        } else {
          wrt.push_back({expectIdent("a variable name"), 1});
        }
      }
      expect(")");
      return Expr(derivative(base, wrt));
    }
    if (id.text == "exp") throw ParseError("exp(...) is only allowed in aux declarations", id.line, id.col);
    if (accept("[")) {
      std::vector<std::pair<Token, int>> wrt;
      while (!accept("]")) {
        wrt.push_back({expectIdent("a variable name"), 1});
        accept(",");
      }
      return Expr(derivative(id, wrt));
    }
    return Expr(atomFor(id));
  }

  Lexer lex_;
  Token tok_;
  VarSpace* vs_;
};

}  // namespace

SystemFile parseSystemFile(const std::string& text) {
  VarSpace vs;
  Parser p(text, &vs);
  return p.file();
}

DPS parseSystem(const std::string& text) { return parseSystemFile(text).dps; }

SystemFile readSystemFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseSystemFile(ss.str());
}

Expr parseExpr(const std::string& text, const VarSpace& vs) {
  VarSpace copy = vs;
  Parser p(text, &copy);
  return p.exprOnly();
}

std::string printSystem(const SystemFile& f) {
  const VarSpace& vs = f.dps.vs;
  std::ostringstream o;
  auto list = [&](const char* kw, const std::vector<std::string>& v) {
    if (v.empty()) return;
    o << kw << " ";
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << v[i];
    o << ";\n";
  };
  list("indep", vs.indep());
  list("dep", vs.dep());
  list("param", vs.params());
  for (const auto& fn : vs.funcs()) {
    o << "func " << fn.name << "(";
    for (std::size_t i = 0; i < fn.args.size(); ++i) o << (i ? ", " : "") << fn.args[i];
    o << ");\n";
  }
  for (const auto& a : f.aux) o << "aux " << a.name << " = exp(" << toString(a.arg, vs) << ");\n";
  for (const auto& e : f.dps.eqs) o << "eq " << toString(e, vs) << ";\n";
  for (const auto& e : f.dps.ineqs) o << "ineq " << toString(e, vs) << ";\n";
  if (f.point) {
    std::vector<std::pair<std::string, mpq_class>> pts;
    for (const auto& [v, q] : *f.point) pts.push_back({vs.varName(v), q});
    std::sort(pts.begin(), pts.end());
    o << "point ";
    for (std::size_t i = 0; i < pts.size(); ++i) o << (i ? ", " : "") << pts[i].first << " = " << toString(pts[i].second);
    o << ";\n";
  }
  for (const auto& m : f.map) o << "map " << m.target << " = " << toString(m.expr, vs) << ";\n";
  if (!f.ranking.empty()) {
    o << "ranking ";
    for (std::size_t b = 0; b < f.ranking.size(); ++b) {
      o << (b ? " > " : "");
      for (std::size_t i = 0; i < f.ranking[b].size(); ++i) o << (i ? ", " : "") << f.ranking[b][i];
    }
    o << ";\n";
  }
  if (f.options.casesplit) o << "option casesplit = " << int(*f.options.casesplit) << ";\n";
  if (f.options.extraOrder) o << "option order = " << *f.options.extraOrder << ";\n";
  if (f.options.maxCases) o << "option cases = " << *f.options.maxCases << ";\n";
  return o.str();
}

Ranking rankingFor(const SystemFile& f) {
  if (f.ranking.empty()) return Ranking::orderly(f.dps.vs);
  std::vector<std::vector<std::string>> blocks = f.ranking;
  // Unknowns left out of the blocks rank lowest.
  std::vector<std::string> rest;
  for (const auto& u : f.dps.vs.unknowns()) {
    bool listed = false;
    for (const auto& b : blocks) listed = listed || std::find(b.begin(), b.end(), u) != b.end();
    if (!listed) rest.push_back(u);
  }
  if (!rest.empty()) blocks.push_back(rest);
  return Ranking::block(f.dps.vs, blocks);
}

CompleteOptions optionsFor(const SystemFile& f, CompleteOptions base) {
  if (f.options.casesplit) base.casesplit = *f.options.casesplit;
  if (f.options.extraOrder) base.extraOrder = *f.options.extraOrder;
  if (f.options.maxCases) base.maxCases = *f.options.maxCases;
  return base;
}

}  // namespace delin
