#include "radar/grounding.h"

#include "radar/errors.h"

#include <algorithm>
#include <unordered_map>

using namespace std;

namespace radar {
using std::to_string;

namespace {
using Binding = unordered_map<string, string>;

string resolve(const string &arg, const Binding &binding) {
    if (!arg.empty() && arg[0] == '?')
        return binding.at(arg);
    return arg;
}

string ground_atom(const AtomTemplate &a, const Binding &binding) {
    vector<string> args;
    args.reserve(a.args.size());
    for (const string &arg : a.args)
        args.push_back(resolve(arg, binding));
    return canonical_term(a.predicate, args);
}

string ground_fluent(const FunctionTerm &t, const Binding &binding) {
    vector<string> args;
    args.reserve(t.args.size());
    for (const string &arg : t.args)
        args.push_back(resolve(arg, binding));
    return canonical_term(t.function, args);
}

bool all_bound(const vector<string> &args, const Binding &binding) {
    return all_of(args.begin(), args.end(), [&](const string &a) {
        return a.empty() || a[0] != '?' || binding.count(a);
    });
}

void sort_unique(vector<string> &v) {
    sort(v.begin(), v.end());
    v.erase(unique(v.begin(), v.end()), v.end());
}

GroundAction build(const ActionSchema &schema, const Binding &binding) {
    GroundAction action;
    action.schema = schema.name;
    for (const TypedName &p : schema.params)
        action.args.push_back(binding.at(p.name));
    action.id = canonical_term(schema.name, action.args);
    for (const AtomTemplate &a : schema.positive_pre)
        action.pre.push_back(ground_atom(a, binding));
    for (const AtomTemplate &a : schema.negative_pre)
        action.neg_pre.push_back(ground_atom(a, binding));
    for (const NumericPreconditionTemplate &n : schema.numeric_pre)
        action.numeric_pre.push_back({ground_fluent(n.term, binding), n.bound});
    for (const AtomTemplate &a : schema.add_effects)
        action.add.push_back(ground_atom(a, binding));
    for (const AtomTemplate &a : schema.delete_effects)
        action.del.push_back(ground_atom(a, binding));
    for (const NumericEffectTemplate &n : schema.numeric_effects)
        action.numeric_eff.push_back({ground_fluent(n.term, binding), n.op, n.amount});
    sort_unique(action.pre);
    sort_unique(action.neg_pre);
    sort_unique(action.add);
    sort_unique(action.del);
    vector<string> del;
    set_difference(action.del.begin(), action.del.end(), action.add.begin(), action.add.end(),
                   back_inserter(del));
    action.del = std::move(del);
    return action;
}

class SchemaGrounder {
    const ActionSchema &schema;
    const AtomSet &init;
    const set<string> &statics;
    vector<vector<string>> candidates;
    Binding binding;
    vector<GroundAction> &out;

    // Checks every static precondition and equality that is fully bound.
    bool consistent() const {
        for (const AtomTemplate &a : schema.positive_pre)
            if (statics.count(a.predicate) && all_bound(a.args, binding) &&
                !init.count(ground_atom(a, binding)))
                return false;
        for (const AtomTemplate &a : schema.negative_pre)
            if (statics.count(a.predicate) && all_bound(a.args, binding) &&
                init.count(ground_atom(a, binding)))
                return false;
        for (const EqualityConstraint &eq : schema.equalities) {
            if (!all_bound({eq.lhs, eq.rhs}, binding))
                continue;
            bool equal = resolve(eq.lhs, binding) == resolve(eq.rhs, binding);
            if (equal == eq.negated)
                return false;
        }
        return true;
    }

    void extend(size_t index) {
        if (index == schema.params.size()) {
            out.push_back(build(schema, binding));
            return;
        }
        const string &var = schema.params[index].name;
        for (const string &obj : candidates[index]) {
            binding[var] = obj;
            if (consistent())
                extend(index + 1);
        }
        binding.erase(var);
    }

public:
    SchemaGrounder(const DomainModel &dom, const ProblemInstance &prob,
                   const ActionSchema &schema, const set<string> &statics,
                   vector<GroundAction> &out)
        : schema(schema), init(prob.init_atoms), statics(statics), out(out) {
        for (const TypedName &p : schema.params) {
            vector<string> objs;
            for (const TypedName &o : prob.objects)
                if (dom.is_subtype(o.type, p.type))
                    objs.push_back(o.name);
            sort(objs.begin(), objs.end());
            candidates.push_back(std::move(objs));
        }
    }

    void run() {
        if (consistent())
            extend(0);
    }
};
}

Quantity State::fluent(const string &name) const {
    auto it = fluents.find(name);
    return it == fluents.end() ? Quantity(0) : it->second;
}

State initial_state(const ProblemInstance &problem) {
    return State{problem.init_atoms, problem.init_fluents};
}

vector<GroundAction> ground(const DomainModel &domain, const ProblemInstance &problem) {
    set<string> statics = domain.static_predicates();
    vector<GroundAction> actions;
    for (const ActionSchema &schema : domain.schemas)
        SchemaGrounder(domain, problem, schema, statics, actions).run();
    sort(actions.begin(), actions.end(),
         [](const GroundAction &a, const GroundAction &b) {return a.id < b.id;});
    return actions;
}

GroundAction instantiate(const DomainModel &domain, const ProblemInstance &problem,
                         string_view action_id) {
    ParsedTerm term = parse_term(action_id);
    const ActionSchema *schema = domain.find_schema(term.name);
    if (!schema)
        throw SemanticError("unknown action '" + term.name + "'");
    if (term.args.size() != schema->params.size())
        throw SemanticError("action '" + term.name + "' expects " +
                            to_string(schema->params.size()) + " arguments, got " +
                            to_string(term.args.size()));
    Binding binding;
    for (size_t i = 0; i < term.args.size(); ++i) {
        const TypedName *obj = problem.find_object(term.args[i]);
        if (!obj)
            throw SemanticError("unknown object '" + term.args[i] + "'");
        if (!domain.is_subtype(obj->type, schema->params[i].type))
            throw SemanticError("object '" + term.args[i] + "' of type " + obj->type +
                                " does not match parameter type " + schema->params[i].type);
        binding[schema->params[i].name] = term.args[i];
    }
    for (const EqualityConstraint &eq : schema->equalities) {
        bool equal = resolve(eq.lhs, binding) == resolve(eq.rhs, binding);
        if (equal == eq.negated)
            throw SemanticError("binding violates an equality constraint of '" +
                                schema->name + "'");
    }
    return build(*schema, binding);
}

ProblemInstance with_context(const ProblemInstance &problem, const State &state,
                             const AtomSet &goal) {
    ProblemInstance result = problem;
    result.init_atoms = state.atoms;
    result.init_fluents = state.fluents;
    result.goal = goal;
    return result;
}
}
