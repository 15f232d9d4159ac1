#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finord {

/// Set-sorted variables range over the whole Boolean algebra, atom-sorted
/// variables over its atoms. Free variables take their sort from the case of
/// their first character; bound variables from their binder.
enum class Sort { Set, Atom };

Sort sort_of_name(std::string_view name);
bool is_identifier(std::string_view name);

class Term {
public:
    enum class Kind : std::uint8_t { Var, Bot, Min, Max };

    static Term var(std::string name);
    static Term bot() { return Term(Kind::Bot, {}); }
    /// Smallest atom. Sugar; removed by desugar().
    static Term min() { return Term(Kind::Min, {}); }
    /// Largest atom. Sugar; removed by desugar().
    static Term max() { return Term(Kind::Max, {}); }

    Kind kind() const noexcept { return kind_; }
    bool is_var() const noexcept { return kind_ == Kind::Var; }
    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Term&, const Term&) = default;

private:
    Term(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    Kind kind_;
    std::string name_;
};

/// Immutable formula of the language {sub, bot, at, <<}, plus the atom-sorted
/// sugar (atom quantifiers, membership X(x), min/max). Cheap to copy.
class Formula {
public:
    enum class Kind : std::uint8_t {
        True,
        False,
        Eq,
        Subset,
        Exle,
        At,
        Mem,
        Not,
        And,
        Or,
        Implies,
        Iff,
        ExistsSet,
        ForallSet,
        ExistsAtom,
        ForallAtom,
    };

    Formula();  // True

    Kind kind() const noexcept;

    /// Terms of an atomic formula. Mem stores (atom, set); At uses lhs only.
    const Term& lhs() const;
    const Term& rhs() const;

    /// Operands of a connective (one for Not, two for the binary ones) or the
    /// body of a quantifier (index 0).
    const Formula& child(std::size_t i) const;
    std::size_t arity() const noexcept;

    /// Bound variable of a quantifier.
    const std::string& var() const;

    bool is_atomic() const noexcept;
    bool is_quantifier() const noexcept;
    bool is_binary() const noexcept;

    friend bool operator==(const Formula& a, const Formula& b);

    struct Node;

private:
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    friend class FormulaFactory;

    std::shared_ptr<const Node> node_;
};

/// Smart constructors. These never validate sorts; use sort_check() for that.
namespace fm {
Formula truth();
Formula falsity();
Formula eq(Term a, Term b);
Formula subset(Term a, Term b);
Formula exle(Term a, Term b);
Formula at(Term a);
Formula mem(Term atom, Term set);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula exists_set(std::string var, Formula body);
Formula forall_set(std::string var, Formula body);
Formula exists_atom(std::string var, Formula body);
Formula forall_atom(std::string var, Formula body);
/// Same kind as `q`, new body. `q` must be a quantifier.
Formula requantify(const Formula& q, std::string var, Formula body);
/// Same connective as `f` with new operands.
Formula rebuild(const Formula& f, std::span<const Formula> children);

/// Balanced-free left fold; empty list gives true/false respectively.
Formula conj_all(std::span<const Formula> fs);
Formula disj_all(std::span<const Formula> fs);

// Frequently used shorthands over variable names.
Formula mem(std::string_view atom, std::string_view set);
Formula less(std::string_view x, std::string_view y);  // x << y on atoms
} // namespace fm

// ---------------------------------------------------------------- syntax

/// Parses the ASCII concrete syntax. Throws SyntaxError or SortError.
Formula parse_formula(std::string_view text);

/// Prints in concrete syntax; parse_formula(to_string(f)) == f for every
/// formula produced by the parser.
std::string to_string(const Formula& f);

// ---------------------------------------------------------------- analysis

std::set<std::string> free_vars(const Formula& f);
bool is_sentence(const Formula& f);
/// Every variable name occurring in f, free or bound.
std::set<std::string> all_names(const Formula& f);

/// Quantifier nesting depth counting every quantifier.
int quantifier_rank(const Formula& f);

/// Checks Mem/membership and atom-term sorts. Throws SortError on the first violation.
void sort_check(const Formula& f);

/// True iff f contains no atom-sorted construct (atom quantifiers, Mem, min, max).
bool is_desugared(const Formula& f);

/// Deterministic fresh name: `stem` followed by the smallest counter value not in `used`.
std::string fresh_name(std::string_view stem, const std::set<std::string>& used);

// ---------------------------------------------------------------- transforms

/// Removes all atom-sorted sugar. Mem(x,X) -> at(x) & x sub X; atom quantifiers
/// become set quantifiers guarded by at(); min/max are expanded around their
/// smallest enclosing atomic formula with a fresh existentially bound atom.
/// Idempotent.
Formula desugar(const Formula& f);

enum class RelativizeMode { ToElement, BelowAtom };

/// ToElement: every set quantifier is bounded by the set variable `bound`.
/// BelowAtom: restriction to the atoms strictly below the atom variable `bound`.
/// The result is desugared. Throws DomainError if `bound` occurs in f.
Formula relativize(const Formula& f, std::string_view bound, RelativizeMode mode);

/// Capture-free substitution of `replacement` for the free occurrences of `var`.
Formula substitute(const Formula& f, std::string_view var, const Term& replacement);

/// Renames bound variables so that every binder is unique and no bound name
/// coincides with a free one.
Formula alpha_rename(const Formula& f);

/// Moves quantifiers inwards past operands that do not mention the bound
/// variable, and orders conjuncts/premises cheapest first. Equivalent on every
/// structure with a nonempty universe.
Formula miniscope(const Formula& f);

} // namespace finord
