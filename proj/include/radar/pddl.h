#ifndef RADAR_PDDL_H
#define RADAR_PDDL_H

#include "quantity.h"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace radar {
struct TypedName {
    std::string name;
    std::string type;
    bool operator==(const TypedName &) const = default;
};

struct Signature {
    std::string name;
    std::vector<TypedName> params;
    bool operator==(const Signature &) const = default;
};

// Arguments are variables ("?x") or constants.
struct AtomTemplate {
    std::string predicate;
    std::vector<std::string> args;
    bool operator==(const AtomTemplate &) const = default;
};

struct FunctionTerm {
    std::string function;
    std::vector<std::string> args;
    bool operator==(const FunctionTerm &) const = default;
};

enum class NumericOp {Decrease, Increase, Assign};

const char *to_string(NumericOp op);

// term >= bound
struct NumericPreconditionTemplate {
    FunctionTerm term;
    Quantity bound;
    bool operator==(const NumericPreconditionTemplate &) const = default;
};

struct NumericEffectTemplate {
    FunctionTerm term;
    NumericOp op;
    Quantity amount;
    bool operator==(const NumericEffectTemplate &) const = default;
};

struct EqualityConstraint {
    std::string lhs;
    std::string rhs;
    bool negated = false;
    bool operator==(const EqualityConstraint &) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<AtomTemplate> positive_pre;
    std::vector<AtomTemplate> negative_pre;
    std::vector<EqualityConstraint> equalities;
    std::vector<NumericPreconditionTemplate> numeric_pre;
    std::vector<AtomTemplate> add_effects;
    std::vector<AtomTemplate> delete_effects;
    std::vector<NumericEffectTemplate> numeric_effects;
    bool operator==(const ActionSchema &) const = default;
};

inline constexpr std::string_view kRootType = "object";

struct DomainModel {
    std::string name;
    std::vector<std::string> requirements;
    // Declaration order; the root type is implicit and not listed.
    std::vector<std::pair<std::string, std::string>> types;
    std::vector<TypedName> constants;
    std::vector<Signature> predicates;
    std::vector<Signature> functions;
    std::vector<ActionSchema> schemas;

    bool operator==(const DomainModel &) const = default;

    bool has_type(std::string_view type) const;
    // True if `type` equals `ancestor` or derives from it.
    bool is_subtype(std::string_view type, std::string_view ancestor) const;
    const Signature *find_predicate(std::string_view name) const;
    const Signature *find_function(std::string_view name) const;
    const ActionSchema *find_schema(std::string_view name) const;
    // Predicates never touched by any schema effect.
    std::set<std::string> static_predicates() const;
};

struct ProblemInstance {
    std::string name;
    std::string domain_name;
    // Problem objects followed by the domain constants.
    std::vector<TypedName> objects;
    std::set<std::string> init_atoms;
    std::map<std::string, Quantity> init_fluents;
    std::set<std::string> goal;

    bool operator==(const ProblemInstance &) const = default;

    const TypedName *find_object(std::string_view name) const;
};

DomainModel parse_domain(std::string_view text);
ProblemInstance parse_problem(std::string_view text, const DomainModel &domain);

std::string print_domain(const DomainModel &domain);
std::string print_problem(const ProblemInstance &problem);

// Canonical ground term: "name" for nullary terms, "name(a,b)" otherwise.
std::string canonical_term(std::string_view name, const std::vector<std::string> &args);

struct ParsedTerm {
    std::string name;
    std::vector<std::string> args;
};

// Parses either the canonical form or the PDDL form "(name a b)".
// Throws InvalidCommand on malformed text.
ParsedTerm parse_term(std::string_view text);

// Validate a ground atom or fluent against the model and return its
// canonical text. Throw SemanticError on unknown symbols or type errors.
std::string check_ground_atom(const DomainModel &domain, const ProblemInstance &problem,
                              std::string_view text);
std::string check_ground_fluent(const DomainModel &domain, const ProblemInstance &problem,
                                std::string_view text);
}

#endif
