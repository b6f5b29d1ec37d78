#include "ctlcode/thread.hpp"

#include <cctype>
#include <functional>
#include <set>

#include "ctlcode/error.hpp"

namespace ctlcode {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

bool guarded_root(const TermPtr& t) {
  return t->kind == Term::Kind::Stop || t->kind == Term::Kind::Dead ||
         t->kind == Term::Kind::PostCond;
}

void free_vars(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      out.insert(t->var);
      break;
    case Term::Kind::PostCond:
      free_vars(t->pos, out);
      free_vars(t->neg, out);
      break;
    default:
      break;  // a nested recursion constant is closed by its own spec
  }
}

}  // namespace

TermPtr stop() {
  static const TermPtr s = make(Term{Term::Kind::Stop, {}, {}, {}, {}, {}});
  return s;
}

TermPtr dead() {
  static const TermPtr d = make(Term{Term::Kind::Dead, {}, {}, {}, {}, {}});
  return d;
}

TermPtr postcond(TermPtr pos, BasicAction a, TermPtr neg) {
  return make(Term{Term::Kind::PostCond, std::move(pos), std::move(neg), std::move(a), {}, {}});
}

TermPtr prefix(BasicAction a, TermPtr t) { return postcond(t, std::move(a), t); }

TermPtr var(std::string name) {
  return make(Term{Term::Kind::Var, {}, {}, {}, std::move(name), {}});
}

TermPtr rec(std::string v, RecSpecPtr spec) {
  if (!spec || !spec->equations.count(v)) {
    throw Error("recursion variable " + v + " is not defined by its specification");
  }
  return make(Term{Term::Kind::RecConst, {}, {}, {}, std::move(v), std::move(spec)});
}

RecSpecPtr make_spec(std::map<std::string, TermPtr> equations) {
  if (equations.empty()) throw Error("empty recursion specification");
  for (const auto& [v, rhs] : equations) {
    if (!guarded_root(rhs)) {
      throw Error("equation for " + v + " is unguarded: right-hand sides start with S, D or <|");
    }
    std::set<std::string> vars;
    free_vars(rhs, vars);
    for (const auto& y : vars) {
      if (!equations.count(y)) throw Error("variable " + y + " has no equation");
    }
  }
  auto spec = std::make_shared<RecSpec>();
  spec->equations = std::move(equations);
  return spec;
}

bool same_term(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Stop:
    case Term::Kind::Dead:
      return true;
    case Term::Kind::Var:
      return a->var == b->var;
    case Term::Kind::PostCond:
      return a->action == b->action && same_term(a->pos, b->pos) && same_term(a->neg, b->neg);
    case Term::Kind::RecConst: {
      if (a->var != b->var) return false;
      if (a->spec == b->spec) return true;
      const auto& ea = a->spec->equations;
      const auto& eb = b->spec->equations;
      if (ea.size() != eb.size()) return false;
      for (auto ia = ea.begin(), ib = eb.begin(); ia != ea.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !same_term(ia->second, ib->second)) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {

TermPtr substitute(const TermPtr& t, const RecSpecPtr& spec) {
  switch (t->kind) {
    case Term::Kind::Var:
      return rec(t->var, spec);
    case Term::Kind::PostCond:
      return postcond(substitute(t->pos, spec), t->action, substitute(t->neg, spec));
    default:
      return t;
  }
}

}  // namespace

TermPtr unfold(const TermPtr& t) {
  if (t->kind != Term::Kind::RecConst) throw Error("unfold needs a recursion constant");
  return substitute(t->spec->equations.at(t->var), t->spec);
}

TermPtr project(std::size_t n, const TermPtr& t) {
  if (n == 0) return dead();
  switch (t->kind) {
    case Term::Kind::Stop:
    case Term::Kind::Dead:
      return t;
    case Term::Kind::PostCond:
      return postcond(project(n - 1, t->pos), t->action, project(n - 1, t->neg));
    case Term::Kind::RecConst:
      return project(n, unfold(t));
    case Term::Kind::Var:
      break;
  }
  throw Error("cannot project a term with free variable " + t->var);
}

bool thread_equal_upto(std::size_t n, const TermPtr& p, const TermPtr& q) {
  return same_term(project(n, p), project(n, q));
}

std::size_t depth(const TermPtr& t) {
  if (t->kind != Term::Kind::PostCond) return 0;
  return 1 + std::max(depth(t->pos), depth(t->neg));
}

bool recursion_free(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Stop:
    case Term::Kind::Dead:
      return true;
    case Term::Kind::PostCond:
      return recursion_free(t->pos) && recursion_free(t->neg);
    default:
      return false;
  }
}

std::vector<BasicAction> actions(const TermPtr& t) {
  std::vector<BasicAction> out;
  std::set<const RecSpec*> visited;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& u) {
    switch (u->kind) {
      case Term::Kind::PostCond:
        out.push_back(u->action);
        walk(u->pos);
        walk(u->neg);
        break;
      case Term::Kind::RecConst:
        if (visited.insert(u->spec.get()).second) {
          for (const auto& [v, rhs] : u->spec->equations) walk(rhs);
        }
        break;
      default:
        break;
    }
  };
  walk(t);
  return out;
}

std::string render(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Stop:
      return "S";
    case Term::Kind::Dead:
      return "D";
    case Term::Kind::Var:
      return t->var;
    case Term::Kind::PostCond: {
      if (same_term(t->pos, t->neg)) return t->action.render() + " ; " + render(t->pos);
      auto side = [](const TermPtr& u) {
        auto s = render(u);
        return u->kind == Term::Kind::PostCond ? "(" + s + ")" : s;
      };
      return side(t->pos) + " <| " + t->action.render() + " |> " + side(t->neg);
    }
    case Term::Kind::RecConst: {
      std::string s = "rec " + t->var + " {";
      bool first = true;
      for (const auto& [v, rhs] : t->spec->equations) {
        s += first ? " " : "; ";
        s += v + " = " + render(rhs);
        first = false;
      }
      return s + " } in " + t->var;
    }
  }
  return "?";
}

namespace {

class ThreadParser {
 public:
  explicit ThreadParser(std::string_view text) : text_(text) {}

  TermPtr parse() {
    auto t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    std::set<std::string> vars;
    free_vars(t, vars);
    if (!vars.empty()) throw ParseError(1, "unbound variable " + *vars.begin());
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(1, "column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  void expect(std::string_view s) {
    if (!peek(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  static bool method_char(char c) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    return std::string_view("(){};<|=>").find(c) == std::string_view::npos;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  BasicAction action_after(std::string focus) {
    ++pos_;  // '.'
    std::size_t start = pos_;
    while (pos_ < text_.size() && method_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("empty method after '" + focus + ".'");
    return {std::move(focus), std::string(text_.substr(start, pos_ - start))};
  }

  BasicAction action() {
    auto focus = ident();
    if (pos_ >= text_.size() || text_[pos_] != '.') fail("expected an action f.m");
    return action_after(std::move(focus));
  }

  TermPtr term() {
    auto p = primary();
    if (peek("<|")) {
      pos_ += 2;
      auto a = action();
      expect("|>");
      auto q = term();
      return postcond(p, std::move(a), q);
    }
    return p;
  }

  TermPtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of thread");
    if (text_[pos_] == '(') {
      ++pos_;
      auto t = term();
      expect(")");
      return t;
    }
    auto name = ident();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      auto a = action_after(std::move(name));
      expect(";");
      return prefix(std::move(a), term());
    }
    if (name == "S") return stop();
    if (name == "D") return dead();
    if (name == "rec") return recursion();
    return var(name);
  }

  TermPtr recursion() {
    auto head = ident();
    expect("{");
    std::map<std::string, TermPtr> equations;
    while (true) {
      auto v = ident();
      expect("=");
      auto rhs = term();
      if (!equations.emplace(v, rhs).second) fail("second equation for " + v);
      if (peek(";")) {
        ++pos_;
        if (peek("}")) break;
        continue;
      }
      break;
    }
    expect("}");
    skip_ws();
    if (ident() != "in") fail("expected 'in'");
    auto chosen = ident();
    if (chosen != head) fail("rec " + head + " { ... } must end with 'in " + head + "'");
    try {
      return rec(chosen, make_spec(std::move(equations)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class UndefinedService final : public Service {
 public:
  std::pair<Reply, ServicePtr> consume(std::string_view) const override {
    return {Reply::Divergent, undefined_service()};
  }
  bool is_undefined() const override { return true; }
  bool same_as(const Service& other) const override { return other.is_undefined(); }
  std::string describe() const override { return "undefined"; }
};

}  // namespace

TermPtr parse_thread(std::string_view text) { return ThreadParser(text).parse(); }

std::string_view to_string(Reply r) {
  switch (r) {
    case Reply::True:
      return "T";
    case Reply::False:
      return "F";
    case Reply::Divergent:
      return "D";
  }
  return "?";
}

ServicePtr undefined_service() {
  static const ServicePtr u = std::make_shared<UndefinedService>();
  return u;
}

std::string_view to_string(ApplyResult::Outcome o) {
  switch (o) {
    case ApplyResult::Outcome::Converged:
      return "converged";
    case ApplyResult::Outcome::Undefined:
      return "undefined";
    case ApplyResult::Outcome::FuelExhausted:
      return "fuel exhausted";
  }
  return "?";
}

ApplyResult apply(const TermPtr& p, std::string_view focus, const ServicePtr& h,
                  std::uint64_t fuel) {
  ApplyResult r;
  auto undefined = [&](std::string why) {
    r.outcome = ApplyResult::Outcome::Undefined;
    r.service = undefined_service();
    r.reason = std::move(why);
    return r;
  };
  TermPtr cur = p;
  ServicePtr svc = h;
  while (true) {
    if (svc->is_undefined()) return undefined("service is undefined");
    switch (cur->kind) {
      case Term::Kind::Stop:
        r.outcome = ApplyResult::Outcome::Converged;
        r.service = svc;
        return r;
      case Term::Kind::Dead:
        return undefined("reached D");
      case Term::Kind::Var:
        throw Error("cannot apply a term with free variable " + cur->var);
      case Term::Kind::RecConst:
        cur = unfold(cur);
        continue;
      case Term::Kind::PostCond:
        break;
    }
    if (cur->action.focus != focus) {
      return undefined("action " + cur->action.render() + " has a foreign focus");
    }
    if (r.actions >= fuel) {
      r.outcome = ApplyResult::Outcome::FuelExhausted;
      r.service = undefined_service();
      r.reason = "no S within " + std::to_string(fuel) + " actions";
      return r;
    }
    ++r.actions;
    auto [reply, next] = svc->consume(cur->action.method);
    r.trace.emplace_back(cur->action.method, reply);
    if (reply == Reply::Divergent) return undefined("reply D to " + cur->action.render());
    cur = reply == Reply::True ? cur->pos : cur->neg;
    svc = next;
  }
}

}  // namespace ctlcode
