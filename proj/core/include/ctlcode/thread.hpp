#pragma once

// Basic thread algebra with guarded recursion, projections, bounded
// comparison and application of threads to services.
//
// Text syntax:
//   S   D   p <| f.m |> q   f.m ; t   (t)   rec X { X = ...; Y = ... } in X
// `f.m ; t` abbreviates `t <| f.m |> t`. Methods run up to whitespace or one
// of ( ) { } ; < | = and so may carry `:`, `/` and `.`.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ctlcode {

struct BasicAction {
  std::string focus;
  std::string method;

  std::string render() const { return focus + "." + method; }
  friend bool operator==(const BasicAction&, const BasicAction&) = default;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Right-hand sides are rooted at S, D or a postconditional composition, and
/// mention only variables of the specification itself.
struct RecSpec {
  std::map<std::string, TermPtr> equations;
};
using RecSpecPtr = std::shared_ptr<const RecSpec>;

struct Term {
  enum class Kind { Stop, Dead, PostCond, RecConst, Var };
  Kind kind = Kind::Stop;
  TermPtr pos, neg;       // PostCond
  BasicAction action;     // PostCond
  std::string var;        // RecConst, Var
  RecSpecPtr spec;        // RecConst
};

TermPtr stop();
TermPtr dead();
TermPtr postcond(TermPtr pos, BasicAction a, TermPtr neg);
/// a ; t
TermPtr prefix(BasicAction a, TermPtr t);
/// Only meaningful inside the right-hand sides of a specification.
TermPtr var(std::string name);
/// Throws Error when `v` is not defined by `spec`.
TermPtr rec(std::string v, RecSpecPtr spec);

/// Throws Error for an unguarded right-hand side or an unbound variable.
RecSpecPtr make_spec(std::map<std::string, TermPtr> equations);

/// Structural equality; recursion constants compare by variable and spec.
bool same_term(const TermPtr& a, const TermPtr& b);

/// One RDP step: the right-hand side of the constant's variable with every
/// variable Y replaced by <Y|E>. Throws Error unless `t` is a RecConst.
TermPtr unfold(const TermPtr& t);

/// pi_n(t): a finite recursion-free term of depth at most n.
TermPtr project(std::size_t n, const TermPtr& t);

/// pi_n(p) and pi_n(q) are structurally equal.
bool thread_equal_upto(std::size_t n, const TermPtr& p, const TermPtr& q);

/// Number of postconditional compositions on the longest path.
std::size_t depth(const TermPtr& t);
bool recursion_free(const TermPtr& t);

/// Every action, including those in recursion specifications.
std::vector<BasicAction> actions(const TermPtr& t);

std::string render(const TermPtr& t);
/// Throws ParseError (line 1, column in the message).
TermPtr parse_thread(std::string_view text);

enum class Reply { True, False, Divergent };
std::string_view to_string(Reply r);

class Service;
using ServicePtr = std::shared_ptr<const Service>;

/// A reply function presented as a state machine: consume answers one
/// method and returns the derived service.
class Service {
 public:
  virtual ~Service() = default;
  virtual std::pair<Reply, ServicePtr> consume(std::string_view method) const = 0;
  virtual bool is_undefined() const { return false; }
  /// Equality by backing state where the family has one; identity otherwise.
  virtual bool same_as(const Service& other) const { return this == &other; }
  virtual std::string describe() const = 0;
};

/// Replies Divergent to everything and derives to itself.
ServicePtr undefined_service();

struct ApplyResult {
  enum class Outcome {
    Converged,      // reached S
    Undefined,      // D, a foreign focus, a Divergent reply, or an undefined service
    FuelExhausted,  // action budget used up before reaching S
  };
  Outcome outcome = Outcome::Converged;
  ServicePtr service;  // the undefined service unless Converged
  std::size_t actions = 0;
  std::vector<std::pair<std::string, Reply>> trace;  // methods processed and replies
  std::string reason;
};
std::string_view to_string(ApplyResult::Outcome o);

/// p ._f h, computed by following replies; `fuel` bounds the number of
/// actions processed. Recursion constants are unfolded on demand.
ApplyResult apply(const TermPtr& p, std::string_view focus, const ServicePtr& h,
                  std::uint64_t fuel);

}  // namespace ctlcode
