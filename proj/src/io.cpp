#include "udpn/io.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace udpn {

bool is_reserved_name(std::string_view name) {
  return name.starts_with("__copy_") || name.starts_with("__shadow_") || name.starts_with("_d");
}

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "net", "places", "vars", "transition", "in", "out", "marking", "run", "step", "histogram"};

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> lex(std::string_view s, std::size_t line = 1) {
  std::vector<Token> out;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n')
        ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    std::size_t start = i;
    Token t{Tok::Punct, "", line, col};
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i]))
        ++i;
      t.kind = Tok::Ident;
    } else if (digit(c)) {
      while (i < s.size() && digit(s[i]))
        ++i;
      if (i < s.size() && s[i] == '/') {
        ++i;
        if (i >= s.size() || !digit(s[i]))
          throw ParseError(line, col, "malformed rational");
        while (i < s.size() && digit(s[i]))
          ++i;
      }
      t.kind = Tok::Number;
    } else {
      static const char *two[] = {"->", "=>", "<=", ">="};
      bool matched = false;
      for (auto p : two)
        if (s.substr(i, 2) == p) {
          i += 2;
          matched = true;
          break;
        }
      if (!matched) {
        if (std::string_view("{};:,-+=<>").find(c) == std::string_view::npos)
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        ++i;
      }
    }
    t.text = std::string(s.substr(start, i - start));
    col += i - start;
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

class Parser {
public:
  Parser(std::string_view text, ParseOptions opt) : toks_(lex(text)), opt_(opt) {}

  const Token &peek() const { return toks_[pos_]; }
  const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token &t, const std::string &msg) const {
    throw ParseError(t.line, t.col, msg);
  }

  bool at(std::string_view punct) const {
    return peek().kind != Tok::End && peek().kind != Tok::Number && peek().text == punct;
  }

  bool accept(std::string_view punct) {
    if (!at(punct))
      return false;
    ++pos_;
    return true;
  }

  void expect(std::string_view punct) {
    if (!accept(punct))
      fail(peek(), "expected '" + std::string(punct) + "'" + found());
  }

  std::string found() const {
    return peek().kind == Tok::End ? ", found end of input" : ", found '" + peek().text + "'";
  }

  const Token &name(const char *what) {
    const Token &t = peek();
    if (t.kind != Tok::Ident)
      fail(t, std::string("expected ") + what + found());
    if (kKeywords.count(t.text))
      fail(t, "keyword '" + t.text + "' cannot be used as a " + what);
    if (!opt_.allow_reserved && is_reserved_name(t.text))
      fail(t, "reserved name '" + t.text + "'");
    return next();
  }

  Rational rational(bool allow_negative, const char *what) {
    const Token &start = peek();
    bool neg = accept("-");
    if (neg && !allow_negative)
      fail(start, std::string("negative ") + what);
    const Token &t = peek();
    if (t.kind != Tok::Number)
      fail(t, std::string("expected ") + what + found());
    auto q = parse_rational(t.text);
    if (!q)
      fail(t, "malformed rational '" + t.text + "'");
    next();
    return neg ? Rational(-*q) : *q;
  }

  void finish() {
    if (peek().kind != Tok::End)
      fail(peek(), "trailing input '" + peek().text + "'");
  }

  // "row: datum q, datum q;" lines up to the closing brace.
  RatMatrix matrix_body(Axis rows, bool allow_negative, const char *row_what,
                        const std::function<void(const Token &)> &check_row) {
    RatMatrix m(rows, Axis::Data);
    std::set<std::string> seen_rows;
    expect("{");
    while (!accept("}")) {
      const Token &r = name(row_what);
      if (check_row)
        check_row(r);
      if (!seen_rows.insert(r.text).second)
        fail(r, std::string("duplicate ") + row_what + " '" + r.text + "'");
      expect(":");
      std::set<std::string> seen;
      if (!at(";")) {
        do {
          const Token &d = name("data value");
          if (!seen.insert(d.text).second)
            fail(d, "duplicate data value '" + d.text + "'");
          m.set(r.text, d.text, rational(allow_negative, "quantity"));
        } while (accept(","));
      }
      expect(";");
    }
    return m;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opt_;
};

} // namespace

Net parse_net(std::string_view text, const ParseOptions &opt) {
  Parser ps(text, opt);
  Net net;
  ps.expect("net");
  ps.expect("{");
  while (!ps.accept("}")) {
    const Token &kw = ps.peek();
    if (ps.accept("places") || ps.accept("vars")) {
      bool places = kw.text == "places";
      while (!ps.accept(";")) {
        const Token &n = ps.name(places ? "place" : "variable");
        if (places ? net.has_place(n.text) : net.has_variable(n.text))
          ps.fail(n, "duplicate " + std::string(places ? "place" : "variable") + " '" + n.text +
                         "'");
        places ? net.add_place(n.text) : net.add_variable(n.text);
      }
    } else if (ps.accept("transition")) {
      const Token &tn = ps.name("transition");
      if (net.has_transition(tn.text))
        ps.fail(tn, "duplicate transition '" + tn.text + "'");
      Transition t{tn.text, {}, {}};
      ps.expect("{");
      while (!ps.accept("}")) {
        bool in = ps.at("in");
        if (!ps.accept("in") && !ps.accept("out"))
          ps.fail(ps.peek(), "expected 'in' or 'out'" + ps.found());
        const Token &p = ps.name("place");
        if (!net.has_place(p.text))
          ps.fail(p, "unknown place '" + p.text + "'");
        Arcs &arcs = in ? t.in : t.out;
        if (arcs.count(p.text))
          ps.fail(p, "duplicate arc list for place '" + p.text + "'");
        auto &row = arcs[p.text];
        ps.expect(":");
        do {
          const Token &w = ps.peek();
          std::uint64_t weight = 1;
          if (ps.at("-"))
            ps.fail(w, "negative flow constant");
          if (w.kind == Tok::Number) {
            if (w.text.find('/') != std::string::npos)
              ps.fail(w, "flow constant must be an integer");
            Integer z(w.text, 10);
            if (z == 0)
              ps.fail(w, "flow constant must be positive");
            if (!z.fits_ulong_p())
              ps.fail(w, "flow constant too large");
            weight = z.get_ui();
            ps.next();
          }
          const Token &x = ps.name("variable");
          if (!net.has_variable(x.text))
            ps.fail(x, "unknown variable '" + x.text + "'");
          if (row.count(x.text))
            ps.fail(x, "duplicate variable '" + x.text + "'");
          row[x.text] = weight;
        } while (ps.accept(","));
        ps.expect(";");
      }
      net.add_transition(std::move(t));
    } else {
      ps.fail(kw, "expected 'places', 'vars', 'transition' or '}'" + ps.found());
    }
  }
  ps.finish();
  return net;
}

Marking parse_marking(std::string_view text, const ParseOptions &opt, const Net *net) {
  Parser ps(text, opt);
  ps.expect("marking");
  Marking m = ps.matrix_body(Axis::Place, true, "place", [&](const Token &p) {
    if (net && !net->has_place(p.text))
      ps.fail(p, "unknown place '" + p.text + "'");
  });
  ps.finish();
  return m;
}

Run parse_run(std::string_view text, const ParseOptions &opt, const Net *net) {
  Parser ps(text, opt);
  Run run;
  ps.expect("run");
  ps.expect("{");
  while (!ps.accept("}")) {
    const Token &st = ps.peek();
    ps.expect("step");
    Step s;
    s.coeff = ps.rational(false, "step coefficient");
    const Token &tn = ps.name("transition");
    if (net && !net->has_transition(tn.text))
      ps.fail(tn, "unknown transition '" + tn.text + "'");
    s.transition = tn.text;
    ps.expect("{");
    while (!ps.accept("}")) {
      const Token &x = ps.name("variable");
      if (net && !net->has_variable(x.text))
        ps.fail(x, "unknown variable '" + x.text + "'");
      if (s.mode.count(x.text))
        ps.fail(x, "variable '" + x.text + "' bound twice");
      ps.expect("->");
      s.mode[x.text] = ps.name("data value").text;
      if (!ps.accept(";") && !ps.at("}"))
        ps.fail(ps.peek(), "expected ';' or '}'" + ps.found());
    }
    if (net) {
      try {
        check_step(*net, s);
      } catch (const Error &e) {
        ps.fail(st, e.what());
      }
    }
    run.push_back(std::move(s));
  }
  ps.finish();
  return run;
}

Histogram parse_histogram(std::string_view text, const ParseOptions &opt) {
  Parser ps(text, opt);
  const Token &start = ps.peek();
  ps.expect("histogram");
  RatMatrix m = ps.matrix_body(Axis::Var, false, "variable", nullptr);
  ps.finish();
  auto q = check_histogram(m);
  if (!q)
    ps.fail(start, "rows must share one sum and no column may exceed it");
  return Histogram{m, *q};
}

ImplicationSystem parse_system(std::string_view text) {
  ImplicationSystem out;
  LinearSystem &sys = out.base;
  auto var = [&](const std::string &n) {
    auto j = sys.find(n);
    return j ? *j : sys.add_var(n);
  };
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view ln = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                          : nl - pos);
    auto toks = lex(ln, line);
    std::size_t k = 0;
    auto fail = [&](const std::string &msg) {
      throw ParseError(toks[k].line, toks[k].col, msg);
    };
    auto is = [&](std::string_view p) {
      return toks[k].kind == Tok::Punct && toks[k].text == p;
    };
    auto number = [&]() -> Rational {
      auto q = parse_rational(toks[k].text);
      if (!q)
        fail("malformed rational '" + toks[k].text + "'");
      ++k;
      return *q;
    };
    auto zero_test = [&] {
      if (!is(">"))
        fail("expected '>'");
      ++k;
      if (toks[k].kind != Tok::Number || toks[k].text != "0")
        fail("expected '0'");
      ++k;
    };
    if (toks[0].kind == Tok::End) {
      // blank line
    } else if (toks[0].kind == Tok::Ident && toks[0].text == "vars") {
      if (sys.num_vars() != 0)
        fail("'vars' must come first");
      for (k = 1; toks[k].kind == Tok::Ident; ++k)
        if (sys.find(toks[k].text))
          fail("duplicate variable '" + toks[k].text + "'");
        else
          sys.add_var(toks[k].text);
    } else if (toks[0].kind == Tok::Ident && toks.size() > 1 && toks[1].text == ">") {
      std::size_t x = var(toks[k++].text);
      zero_test();
      if (!is("=>"))
        fail("expected '=>'");
      ++k;
      if (toks[k].kind != Tok::Ident)
        fail("expected a variable");
      std::size_t y = var(toks[k++].text);
      zero_test();
      out.implications.emplace_back(x, y);
    } else {
      Constraint c;
      auto add_term = [&](std::size_t j, const Rational &v) {
        for (auto &[i, w] : c.coeffs)
          if (i == j) {
            w += v;
            return;
          }
        c.coeffs.emplace_back(j, v);
      };
      bool first = true;
      for (;;) {
        Rational sign = 1;
        if (is("-") || is("+")) {
          if (is("+") && first)
            fail("unexpected '+'");
          sign = is("-") ? -1 : 1;
          ++k;
        } else if (!first) {
          break;
        }
        Rational a = 1;
        bool had_number = false;
        if (toks[k].kind == Tok::Number) {
          a = number();
          had_number = true;
        }
        if (toks[k].kind == Tok::Ident) {
          add_term(var(toks[k++].text), sign * a);
        } else if (!(had_number && first && is_zero(a))) {
          fail("expected a variable");
        }
        first = false;
      }
      if (is("="))
        c.rel = Rel::Eq;
      else if (is("<="))
        c.rel = Rel::Le;
      else if (is(">="))
        c.rel = Rel::Ge;
      else
        fail("expected '=', '<=' or '>='");
      ++k;
      bool neg = is("-");
      if (neg)
        ++k;
      if (toks[k].kind != Tok::Number)
        fail("expected a number");
      c.rhs = number();
      if (neg)
        c.rhs = -c.rhs;
      std::erase_if(c.coeffs, [](auto &e) { return is_zero(e.second); });
      sys.add(std::move(c));
    }
    if (toks[k].kind != Tok::End)
      fail("trailing input '" + toks[k].text + "'");
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
    ++line;
  }
  return out;
}

std::string serialize(const Net &net) {
  std::ostringstream os;
  os << "net {\n  places";
  for (auto &p : net.places())
    os << ' ' << p;
  os << ";\n  vars";
  for (auto &x : net.variables())
    os << ' ' << x;
  os << ";\n";
  for (auto &t : net.transitions()) {
    os << "  transition " << t.name << " {\n";
    for (auto [arcs, kw] : {std::pair{&t.in, "in"}, std::pair{&t.out, "out"}})
      for (auto &p : net.places()) {
        auto it = arcs->find(p);
        if (it == arcs->end())
          continue;
        os << "    " << kw << ' ' << p << ':';
        const char *sep = " ";
        for (auto &x : net.variables()) {
          auto w = it->second.find(x);
          if (w == it->second.end())
            continue;
          os << sep;
          if (w->second != 1)
            os << w->second;
          os << x;
          sep = ", ";
        }
        os << ";\n";
      }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

static void write_rows(std::ostream &os, const RatMatrix &m) {
  std::string row;
  for (auto &[k, v] : m.entries()) {
    if (k.first != row) {
      if (!row.empty())
        os << ";\n";
      row = k.first;
      os << "  " << row << ": ";
    } else {
      os << ", ";
    }
    os << k.second << ' ' << to_string(v);
  }
  if (!row.empty())
    os << ";\n";
}

std::string serialize_marking(const Marking &m) {
  std::ostringstream os;
  os << "marking {\n";
  write_rows(os, m);
  os << "}\n";
  return os.str();
}

std::string serialize(const Histogram &h) {
  std::ostringstream os;
  os << "histogram {\n";
  write_rows(os, h.matrix);
  os << "}\n";
  return os.str();
}

std::string serialize(const Run &run) {
  std::ostringstream os;
  os << "run {\n";
  for (auto &s : run) {
    os << "  step " << to_string(s.coeff) << ' ' << s.transition << " {";
    const char *sep = " ";
    for (auto &[x, a] : s.mode) {
      os << sep << x << " -> " << a;
      sep = "; ";
    }
    os << (s.mode.empty() ? "}\n" : " }\n");
  }
  os << "}\n";
  return os.str();
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw Error("cannot write '" + path + "'");
}

} // namespace udpn
