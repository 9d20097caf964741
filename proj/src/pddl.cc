#include "radar/pddl.h"

#include "radar/errors.h"

#include <algorithm>
#include <cctype>
#include <sstream>

using namespace std;

namespace radar {
using std::to_string;

namespace {
struct SExpr {
    bool is_list = false;
    string atom;
    vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is_symbol() const {return !is_list;}
    bool is_symbol(string_view s) const {return !is_list && atom == s;}
    // Head symbol of a list, or "" for atoms and empty lists.
    const string &head() const {
        static const string empty;
        return is_list && !items.empty() && !items[0].is_list ? items[0].atom : empty;
    }
};

class Reader {
    string_view text;
    size_t pos = 0;
    int line = 1;
    int column = 1;

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_blank() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {
                while (pos < text.size() && text[pos] != '\n')
                    advance();
            } else if (isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read_expr() {
        skip_blank();
        if (pos >= text.size())
            throw SyntaxError("unexpected end of input", line, column);
        SExpr expr;
        expr.line = line;
        expr.column = column;
        char c = text[pos];
        if (c == '(') {
            expr.is_list = true;
            advance();
            while (true) {
                skip_blank();
                if (pos >= text.size())
                    throw SyntaxError("unbalanced parenthesis opened here",
                                      expr.line, expr.column);
                if (text[pos] == ')') {
                    advance();
                    break;
                }
                expr.items.push_back(read_expr());
            }
        } else if (c == ')') {
            throw SyntaxError("unexpected ')'", line, column);
        } else {
            while (pos < text.size()) {
                char d = text[pos];
                if (d == '(' || d == ')' || d == ';' ||
                    isspace(static_cast<unsigned char>(d)))
                    break;
                expr.atom.push_back(static_cast<char>(tolower(static_cast<unsigned char>(d))));
                advance();
            }
        }
        return expr;
    }

public:
    explicit Reader(string_view text) : text(text) {}

    SExpr read_document() {
        SExpr expr = read_expr();
        skip_blank();
        if (pos < text.size())
            throw SyntaxError("trailing content after definition", line, column);
        if (!expr.is_list)
            throw SyntaxError("expected '(define ...)'", expr.line, expr.column);
        return expr;
    }
};

[[noreturn]] void syntax(const SExpr &at, const string &message) {
    throw SyntaxError(message, at.line, at.column);
}

[[noreturn]] void semantic(const SExpr &at, const string &message) {
    throw SemanticError(message, at.line, at.column);
}

const set<string> &supported_requirements() {
    static const set<string> supported = {
        ":strips", ":typing", ":negative-preconditions", ":equality",
        ":fluents", ":numeric-fluents"};
    return supported;
}

const SExpr &symbol_at(const SExpr &list, size_t index, const string &what) {
    if (index >= list.items.size())
        syntax(list, "missing " + what);
    const SExpr &e = list.items[index];
    if (e.is_list)
        syntax(e, "expected " + what);
    return e;
}

bool is_variable(string_view s) {
    return !s.empty() && s[0] == '?';
}

bool looks_numeric(string_view s) {
    return !s.empty() && (isdigit(static_cast<unsigned char>(s[0])) ||
                          ((s[0] == '-' || s[0] == '.') && s.size() > 1));
}

// "a b - t c" style lists. Untyped names get `default_type`.
vector<TypedName> parse_typed_list(const SExpr &list, size_t begin, const string &default_type) {
    vector<TypedName> result;
    vector<TypedName> pending;
    for (size_t i = begin; i < list.items.size(); ++i) {
        const SExpr &e = list.items[i];
        if (e.is_list) {
            if (e.head() == "either")
                throw UnsupportedFeature("either-types", e.line, e.column);
            syntax(e, "expected a name in typed list");
        }
        if (e.atom == "-") {
            if (i + 1 >= list.items.size())
                syntax(e, "missing type after '-'");
            const SExpr &t = list.items[i + 1];
            if (t.is_list) {
                if (t.head() == "either")
                    throw UnsupportedFeature("either-types", t.line, t.column);
                syntax(t, "expected a type name");
            }
            if (pending.empty())
                syntax(e, "type annotation without names");
            for (TypedName &p : pending) {
                p.type = t.atom;
                result.push_back(std::move(p));
            }
            pending.clear();
            ++i;
        } else {
            pending.push_back({e.atom, default_type});
        }
    }
    for (TypedName &p : pending)
        result.push_back(std::move(p));
    return result;
}

Quantity parse_constant(const SExpr &e) {
    if (e.is_list)
        syntax(e, "expected a numeric constant");
    try {
        Quantity q = parse_quantity(e.atom);
        if (q < 0)
            semantic(e, "resource constants must be nonnegative: " + e.atom);
        return q;
    } catch (const invalid_argument &) {
        syntax(e, "malformed number '" + e.atom + "'");
    }
}

class DomainParser {
    DomainModel &dom;
    // Source positions of schema declarations, for error messages.
    struct Scope {
        const SExpr *where;
        const vector<TypedName> *params;
    };

public:
    explicit DomainParser(DomainModel &dom) : dom(dom) {}

    void parse(const SExpr &root) {
        if (root.head() != "define")
            syntax(root, "expected 'define'");
        if (root.items.size() < 2 || root.items[1].head() != "domain")
            syntax(root, "expected '(domain <name>)'");
        dom.name = symbol_at(root.items[1], 1, "domain name").atom;

        vector<const SExpr *> actions;
        for (size_t i = 2; i < root.items.size(); ++i) {
            const SExpr &section = root.items[i];
            const string &key = section.head();
            if (key == ":requirements") {
                parse_requirements(section);
            } else if (key == ":types") {
                parse_types(section);
            } else if (key == ":constants") {
                for (TypedName &c : parse_typed_list(section, 1, string(kRootType)))
                    dom.constants.push_back(std::move(c));
            } else if (key == ":predicates") {
                for (size_t j = 1; j < section.items.size(); ++j)
                    dom.predicates.push_back(parse_signature(section.items[j], false));
            } else if (key == ":functions") {
                parse_functions(section);
            } else if (key == ":action") {
                actions.push_back(&section);
            } else if (key == ":durative-action") {
                throw UnsupportedFeature(":durative-actions", section.line, section.column);
            } else if (key == ":derived") {
                throw UnsupportedFeature(":derived-predicates", section.line, section.column);
            } else if (key == ":constraints") {
                throw UnsupportedFeature(":constraints", section.line, section.column);
            } else {
                syntax(section, "unknown domain section '" + key + "'");
            }
        }
        check_declarations(root);
        for (const SExpr *a : actions)
            dom.schemas.push_back(parse_action(*a));
    }

private:
    void parse_requirements(const SExpr &section) {
        for (size_t j = 1; j < section.items.size(); ++j) {
            const SExpr &r = section.items[j];
            if (r.is_list)
                syntax(r, "expected a requirement keyword");
            if (!supported_requirements().count(r.atom))
                throw UnsupportedFeature(r.atom, r.line, r.column);
            dom.requirements.push_back(r.atom);
        }
    }

    void parse_types(const SExpr &section) {
        for (TypedName &t : parse_typed_list(section, 1, string(kRootType))) {
            if (t.name == kRootType)
                continue;
            auto dup = find_if(dom.types.begin(), dom.types.end(),
                               [&](const auto &p) {return p.first == t.name;});
            if (dup != dom.types.end())
                semantic(section, "type declared twice: " + t.name);
            dom.types.emplace_back(t.name, t.type);
        }
    }

    void parse_functions(const SExpr &section) {
        for (size_t j = 1; j < section.items.size(); ++j) {
            const SExpr &e = section.items[j];
            if (e.is_symbol("-")) {
                // Result type annotation; only numbers are supported.
                const SExpr &t = symbol_at(section, j + 1, "function type");
                if (t.atom != "number")
                    throw UnsupportedFeature(":object-fluents", t.line, t.column);
                ++j;
                continue;
            }
            dom.functions.push_back(parse_signature(e, true));
        }
    }

    Signature parse_signature(const SExpr &e, bool is_function) {
        if (!e.is_list || e.items.empty())
            syntax(e, is_function ? "expected a function declaration"
                   : "expected a predicate declaration");
        Signature sig;
        sig.name = symbol_at(e, 0, "name").atom;
        sig.params = parse_typed_list(e, 1, string(kRootType));
        for (const TypedName &p : sig.params)
            if (!is_variable(p.name))
                syntax(e, "parameter '" + p.name + "' must be a variable");
        return sig;
    }

    void check_declarations(const SExpr &root) {
        for (const auto &[name, parent] : dom.types) {
            if (!dom.has_type(parent))
                semantic(root, "undeclared type '" + parent + "'");
        }
        for (const auto &[name, parent] : dom.types) {
            // Walk up; a cycle never reaches the root.
            string current = name;
            for (size_t steps = 0; current != kRootType; ++steps) {
                if (steps > dom.types.size())
                    semantic(root, "cyclic type hierarchy through '" + name + "'");
                auto it = find_if(dom.types.begin(), dom.types.end(),
                                  [&](const auto &p) {return p.first == current;});
                current = it->second;
            }
        }
        auto check_unique = [&](const vector<Signature> &sigs, const string &what) {
            set<string> seen;
            for (const Signature &s : sigs)
                if (!seen.insert(s.name).second)
                    semantic(root, what + " declared twice: " + s.name);
        };
        check_unique(dom.predicates, "predicate");
        check_unique(dom.functions, "function");
        for (const Signature &s : dom.predicates)
            if (dom.find_function(s.name))
                semantic(root, "'" + s.name + "' is both a predicate and a function");
        auto check_types = [&](const vector<TypedName> &names) {
            for (const TypedName &n : names)
                if (!dom.has_type(n.type))
                    semantic(root, "undeclared type '" + n.type + "' for '" + n.name + "'");
        };
        for (const Signature &s : dom.predicates)
            check_types(s.params);
        for (const Signature &s : dom.functions)
            check_types(s.params);
        check_types(dom.constants);
        set<string> seen;
        for (const TypedName &c : dom.constants)
            if (!seen.insert(c.name).second)
                semantic(root, "constant declared twice: " + c.name);
    }

    string argument_type(const SExpr &at, const string &arg, const Scope &scope) {
        if (is_variable(arg)) {
            for (const TypedName &p : *scope.params)
                if (p.name == arg)
                    return p.type;
            semantic(at, "variable '" + arg + "' is not a parameter of the action");
        }
        for (const TypedName &c : dom.constants)
            if (c.name == arg)
                return c.type;
        semantic(at, "unknown constant '" + arg + "'");
    }

    void check_args(const SExpr &at, const Signature &sig, const vector<string> &args,
                    const Scope &scope) {
        if (args.size() != sig.params.size())
            semantic(at, "'" + sig.name + "' expects " + to_string(sig.params.size()) +
                     " arguments, got " + to_string(args.size()));
        for (size_t i = 0; i < args.size(); ++i) {
            string type = argument_type(at, args[i], scope);
            if (!dom.is_subtype(type, sig.params[i].type))
                semantic(at, "argument '" + args[i] + "' of type " + type +
                         " does not match parameter type " + sig.params[i].type +
                         " of '" + sig.name + "'");
        }
    }

    vector<string> symbol_args(const SExpr &e, size_t begin) {
        vector<string> args;
        for (size_t i = begin; i < e.items.size(); ++i) {
            if (e.items[i].is_list)
                syntax(e.items[i], "nested terms are not supported");
            args.push_back(e.items[i].atom);
        }
        return args;
    }

    AtomTemplate parse_atom(const SExpr &e, const Scope &scope) {
        if (!e.is_list || e.items.empty() || e.items[0].is_list)
            syntax(e, "expected an atom");
        AtomTemplate atom{e.items[0].atom, symbol_args(e, 1)};
        const Signature *sig = dom.find_predicate(atom.predicate);
        if (!sig)
            semantic(e, "undeclared predicate '" + atom.predicate + "'");
        check_args(e, *sig, atom.args, scope);
        return atom;
    }

    FunctionTerm parse_function_term(const SExpr &e, const Scope &scope) {
        if (!e.is_list || e.items.empty() || e.items[0].is_list)
            syntax(e, "expected a function term");
        FunctionTerm term{e.items[0].atom, symbol_args(e, 1)};
        const Signature *sig = dom.find_function(term.function);
        if (!sig)
            semantic(e, "undeclared function '" + term.function + "'");
        check_args(e, *sig, term.args, scope);
        return term;
    }

    void parse_precondition(const SExpr &e, ActionSchema &schema, const Scope &scope) {
        if (!e.is_list)
            syntax(e, "expected a precondition formula");
        if (e.items.empty())
            return;
        const string &head = e.head();
        if (head == "and") {
            for (size_t i = 1; i < e.items.size(); ++i)
                parse_precondition(e.items[i], schema, scope);
        } else if (head == "not") {
            if (e.items.size() != 2)
                syntax(e, "'not' takes one argument");
            const SExpr &inner = e.items[1];
            if (inner.head() == "=") {
                schema.equalities.push_back(parse_equality(inner, scope, true));
            } else if (inner.is_list && !inner.items.empty() &&
                       (inner.head() == "and" || inner.head() == "or" ||
                        inner.head() == "not" || inner.head() == "exists" ||
                        inner.head() == "forall" || inner.head() == "imply")) {
                throw UnsupportedFeature(":disjunctive-preconditions", inner.line, inner.column);
            } else {
                schema.negative_pre.push_back(parse_atom(inner, scope));
            }
        } else if (head == "=") {
            schema.equalities.push_back(parse_equality(e, scope, false));
        } else if (head == ">=") {
            if (e.items.size() != 3)
                syntax(e, "'>=' takes two arguments");
            schema.numeric_pre.push_back(
                {parse_function_term(e.items[1], scope), parse_constant(e.items[2])});
        } else if (head == ">" || head == "<" || head == "<=") {
            throw UnsupportedFeature("numeric comparator " + head, e.line, e.column);
        } else if (head == "or" || head == "imply") {
            throw UnsupportedFeature(":disjunctive-preconditions", e.line, e.column);
        } else if (head == "forall" || head == "exists") {
            throw UnsupportedFeature(":quantified-preconditions", e.line, e.column);
        } else {
            schema.positive_pre.push_back(parse_atom(e, scope));
        }
    }

    EqualityConstraint parse_equality(const SExpr &e, const Scope &scope, bool negated) {
        if (e.items.size() != 3 || e.items[1].is_list || e.items[2].is_list) {
            if (e.items.size() == 3 && e.items[1].is_list)
                throw UnsupportedFeature("numeric equality comparison", e.line, e.column);
            syntax(e, "'=' takes two terms");
        }
        argument_type(e, e.items[1].atom, scope);
        argument_type(e, e.items[2].atom, scope);
        return {e.items[1].atom, e.items[2].atom, negated};
    }

    void parse_effect(const SExpr &e, ActionSchema &schema, const Scope &scope) {
        if (!e.is_list)
            syntax(e, "expected an effect");
        if (e.items.empty())
            return;
        const string &head = e.head();
        if (head == "and") {
            for (size_t i = 1; i < e.items.size(); ++i)
                parse_effect(e.items[i], schema, scope);
        } else if (head == "not") {
            if (e.items.size() != 2)
                syntax(e, "'not' takes one argument");
            schema.delete_effects.push_back(parse_atom(e.items[1], scope));
        } else if (head == "increase" || head == "decrease" || head == "assign") {
            if (e.items.size() != 3)
                syntax(e, "'" + head + "' takes two arguments");
            NumericOp op = head == "increase" ? NumericOp::Increase
                : head == "decrease" ? NumericOp::Decrease : NumericOp::Assign;
            if (e.items[2].is_list)
                throw UnsupportedFeature("non-constant numeric effect", e.items[2].line,
                                         e.items[2].column);
            schema.numeric_effects.push_back(
                {parse_function_term(e.items[1], scope), op, parse_constant(e.items[2])});
        } else if (head == "when") {
            throw UnsupportedFeature(":conditional-effects", e.line, e.column);
        } else if (head == "forall") {
            throw UnsupportedFeature(":universal-effects", e.line, e.column);
        } else if (head == "scale-up" || head == "scale-down") {
            throw UnsupportedFeature("numeric effect " + head, e.line, e.column);
        } else {
            schema.add_effects.push_back(parse_atom(e, scope));
        }
    }

    ActionSchema parse_action(const SExpr &e) {
        ActionSchema schema;
        schema.name = symbol_at(e, 1, "action name").atom;
        if (dom.find_schema(schema.name))
            semantic(e, "action declared twice: " + schema.name);
        Scope scope{&e, &schema.params};
        const SExpr *pre = nullptr;
        const SExpr *eff = nullptr;
        for (size_t i = 2; i < e.items.size(); i += 2) {
            const SExpr &key = e.items[i];
            if (!key.is_symbol())
                syntax(key, "expected an action keyword");
            if (i + 1 >= e.items.size())
                syntax(key, "missing value for " + key.atom);
            const SExpr &value = e.items[i + 1];
            if (key.atom == ":parameters") {
                if (!value.is_list)
                    syntax(value, "expected a parameter list");
                schema.params = parse_typed_list(value, 0, string(kRootType));
                set<string> seen;
                for (const TypedName &p : schema.params) {
                    if (!is_variable(p.name))
                        syntax(value, "parameter '" + p.name + "' must be a variable");
                    if (!dom.has_type(p.type))
                        semantic(value, "undeclared type '" + p.type + "'");
                    if (!seen.insert(p.name).second)
                        semantic(value, "duplicate parameter " + p.name);
                }
            } else if (key.atom == ":precondition") {
                pre = &value;
            } else if (key.atom == ":effect") {
                eff = &value;
            } else if (key.atom == ":duration") {
                throw UnsupportedFeature(":durative-actions", key.line, key.column);
            } else {
                syntax(key, "unknown action keyword " + key.atom);
            }
        }
        if (pre)
            parse_precondition(*pre, schema, scope);
        if (eff)
            parse_effect(*eff, schema, scope);
        for (const AtomTemplate &a : schema.add_effects)
            if (find(schema.delete_effects.begin(), schema.delete_effects.end(), a) !=
                schema.delete_effects.end())
                semantic(e, "atom '" + a.predicate + "' is both added and deleted by " +
                         schema.name);
        return schema;
    }
};

class ProblemParser {
    const DomainModel &dom;
    ProblemInstance &prob;

public:
    ProblemParser(const DomainModel &dom, ProblemInstance &prob) : dom(dom), prob(prob) {}

    void parse(const SExpr &root) {
        if (root.head() != "define")
            syntax(root, "expected 'define'");
        if (root.items.size() < 2 || root.items[1].head() != "problem")
            syntax(root, "expected '(problem <name>)'");
        prob.name = symbol_at(root.items[1], 1, "problem name").atom;
        vector<const SExpr *> inits;
        const SExpr *goal = nullptr;
        for (size_t i = 2; i < root.items.size(); ++i) {
            const SExpr &section = root.items[i];
            const string &key = section.head();
            if (key == ":domain") {
                prob.domain_name = symbol_at(section, 1, "domain name").atom;
                if (prob.domain_name != dom.name)
                    semantic(section, "problem is for domain '" + prob.domain_name +
                             "', not '" + dom.name + "'");
            } else if (key == ":requirements") {
                for (size_t j = 1; j < section.items.size(); ++j) {
                    const SExpr &r = section.items[j];
                    if (r.is_list || !supported_requirements().count(r.atom))
                        throw UnsupportedFeature(r.is_list ? "requirement" : r.atom,
                                                 r.line, r.column);
                }
            } else if (key == ":objects") {
                parse_objects(section);
            } else if (key == ":init") {
                inits.push_back(&section);
            } else if (key == ":goal") {
                goal = &section;
            } else if (key == ":metric") {
                throw UnsupportedFeature(":metric", section.line, section.column);
            } else if (key == ":constraints") {
                throw UnsupportedFeature(":constraints", section.line, section.column);
            } else {
                syntax(section, "unknown problem section '" + key + "'");
            }
        }
        for (const TypedName &c : dom.constants)
            if (!prob.find_object(c.name))
                prob.objects.push_back(c);
        for (const SExpr *init : inits)
            for (size_t j = 1; j < init->items.size(); ++j)
                parse_init_element(init->items[j]);
        if (!goal)
            syntax(root, "missing :goal");
        if (goal->items.size() != 2)
            syntax(*goal, ":goal takes one formula");
        parse_goal(goal->items[1]);
    }

private:
    void parse_objects(const SExpr &section) {
        for (TypedName &o : parse_typed_list(section, 1, string(kRootType))) {
            if (!dom.has_type(o.type))
                semantic(section, "object '" + o.name + "' has unknown type '" + o.type + "'");
            if (prob.find_object(o.name))
                semantic(section, "object declared twice: " + o.name);
            prob.objects.push_back(std::move(o));
        }
    }

    string ground(const SExpr &e, const Signature &sig) {
        vector<string> args;
        for (size_t i = 1; i < e.items.size(); ++i) {
            if (e.items[i].is_list)
                syntax(e.items[i], "expected an object name");
            args.push_back(e.items[i].atom);
        }
        if (args.size() != sig.params.size())
            semantic(e, "'" + sig.name + "' expects " + to_string(sig.params.size()) +
                     " arguments, got " + to_string(args.size()));
        for (size_t i = 0; i < args.size(); ++i) {
            const TypedName *obj = prob.find_object(args[i]);
            if (!obj)
                semantic(e.items[i + 1], "undeclared object '" + args[i] + "'");
            if (!dom.is_subtype(obj->type, sig.params[i].type))
                semantic(e.items[i + 1], "object '" + args[i] + "' of type " + obj->type +
                         " does not match parameter type " + sig.params[i].type);
        }
        return canonical_term(sig.name, args);
    }

    string ground_atom(const SExpr &e) {
        if (!e.is_list || e.items.empty() || e.items[0].is_list)
            syntax(e, "expected a ground atom");
        const Signature *sig = dom.find_predicate(e.items[0].atom);
        if (!sig)
            semantic(e, "undeclared predicate '" + e.items[0].atom + "'");
        return ground(e, *sig);
    }

    void parse_init_element(const SExpr &e) {
        if (e.head() == "=") {
            if (e.items.size() != 3)
                syntax(e, "'=' takes a function term and a value");
            const SExpr &term = e.items[1];
            if (!term.is_list || term.items.empty() || term.items[0].is_list)
                syntax(term, "expected a function term");
            const Signature *sig = dom.find_function(term.items[0].atom);
            if (!sig)
                semantic(term, "undeclared function '" + term.items[0].atom + "'");
            string fluent = ground(term, *sig);
            if (prob.init_fluents.count(fluent))
                semantic(e, "fluent initialised twice: " + fluent);
            prob.init_fluents[fluent] = parse_constant(e.items[2]);
        } else if (e.head() == "not") {
            // Closed world: explicit negative literals add nothing.
            ground_atom(e.items.size() == 2 ? e.items[1] : e);
        } else if (e.head() == "at" && e.items.size() == 3 && looks_numeric(e.items[1].atom)) {
            throw UnsupportedFeature(":timed-initial-literals", e.line, e.column);
        } else {
            prob.init_atoms.insert(ground_atom(e));
        }
    }

    void parse_goal(const SExpr &e) {
        if (!e.is_list)
            syntax(e, "expected a goal formula");
        if (e.items.empty())
            return;
        const string &head = e.head();
        if (head == "and") {
            for (size_t i = 1; i < e.items.size(); ++i)
                parse_goal(e.items[i]);
        } else if (head == "not") {
            throw UnsupportedFeature("negative goals", e.line, e.column);
        } else if (head == "or" || head == "imply") {
            throw UnsupportedFeature("disjunctive goals", e.line, e.column);
        } else if (head == "forall" || head == "exists") {
            throw UnsupportedFeature("quantified goals", e.line, e.column);
        } else if (head == ">=" || head == ">" || head == "<" || head == "<=" || head == "=") {
            throw UnsupportedFeature("numeric goals", e.line, e.column);
        } else {
            prob.goal.insert(ground_atom(e));
        }
    }
};

void print_typed_list(ostream &out, const vector<TypedName> &names) {
    for (size_t i = 0; i < names.size(); ++i) {
        out << (i ? " " : "") << names[i].name;
        bool last_of_type = i + 1 == names.size() || names[i + 1].type != names[i].type;
        if (last_of_type)
            out << " - " << names[i].type;
    }
}

void print_args(ostream &out, const vector<string> &args) {
    for (const string &a : args)
        out << " " << a;
}

void print_atom(ostream &out, const AtomTemplate &atom) {
    out << "(" << atom.predicate;
    print_args(out, atom.args);
    out << ")";
}

void print_term(ostream &out, const FunctionTerm &term) {
    out << "(" << term.function;
    print_args(out, term.args);
    out << ")";
}

string pddl_form(const string &canonical) {
    ParsedTerm t = parse_term(canonical);
    ostringstream out;
    out << "(" << t.name;
    print_args(out, t.args);
    out << ")";
    return out.str();
}

string pddl_number(const Quantity &q) {
    if (q.denominator() == 1)
        return to_string(q.numerator());
    // Exact decimal is not always possible; fall back to a rational the
    // reader understands.
    return format_quantity(q);
}
}

const char *to_string(NumericOp op) {
    switch (op) {
    case NumericOp::Decrease: return "decrease";
    case NumericOp::Increase: return "increase";
    case NumericOp::Assign: return "assign";
    }
    return "?";
}

bool DomainModel::has_type(string_view type) const {
    if (type == kRootType)
        return true;
    return any_of(types.begin(), types.end(), [&](const auto &p) {return p.first == type;});
}

bool DomainModel::is_subtype(string_view type, string_view ancestor) const {
    string current(type);
    for (size_t steps = 0; steps <= types.size() + 1; ++steps) {
        if (current == ancestor)
            return true;
        if (current == kRootType)
            return false;
        auto it = find_if(types.begin(), types.end(),
                          [&](const auto &p) {return p.first == current;});
        if (it == types.end())
            return false;
        current = it->second;
    }
    return false;
}

const Signature *DomainModel::find_predicate(string_view n) const {
    auto it = find_if(predicates.begin(), predicates.end(),
                      [&](const Signature &s) {return s.name == n;});
    return it == predicates.end() ? nullptr : &*it;
}

const Signature *DomainModel::find_function(string_view n) const {
    auto it = find_if(functions.begin(), functions.end(),
                      [&](const Signature &s) {return s.name == n;});
    return it == functions.end() ? nullptr : &*it;
}

const ActionSchema *DomainModel::find_schema(string_view n) const {
    auto it = find_if(schemas.begin(), schemas.end(),
                      [&](const ActionSchema &s) {return s.name == n;});
    return it == schemas.end() ? nullptr : &*it;
}

set<string> DomainModel::static_predicates() const {
    set<string> result;
    for (const Signature &p : predicates)
        result.insert(p.name);
    for (const ActionSchema &s : schemas) {
        for (const AtomTemplate &a : s.add_effects)
            result.erase(a.predicate);
        for (const AtomTemplate &a : s.delete_effects)
            result.erase(a.predicate);
    }
    return result;
}

const TypedName *ProblemInstance::find_object(string_view n) const {
    auto it = find_if(objects.begin(), objects.end(),
                      [&](const TypedName &o) {return o.name == n;});
    return it == objects.end() ? nullptr : &*it;
}

DomainModel parse_domain(string_view text) {
    SExpr root = Reader(text).read_document();
    DomainModel dom;
    DomainParser(dom).parse(root);
    return dom;
}

ProblemInstance parse_problem(string_view text, const DomainModel &domain) {
    SExpr root = Reader(text).read_document();
    ProblemInstance prob;
    ProblemParser(domain, prob).parse(root);
    return prob;
}

string print_domain(const DomainModel &dom) {
    ostringstream out;
    out << "(define (domain " << dom.name << ")\n";
    if (!dom.requirements.empty()) {
        out << "  (:requirements";
        for (const string &r : dom.requirements)
            out << " " << r;
        out << ")\n";
    }
    if (!dom.types.empty()) {
        out << "  (:types";
        for (const auto &[name, parent] : dom.types)
            out << " " << name << " - " << parent;
        out << ")\n";
    }
    if (!dom.constants.empty()) {
        out << "  (:constants ";
        print_typed_list(out, dom.constants);
        out << ")\n";
    }
    auto print_signatures = [&](const char *section, const vector<Signature> &sigs) {
        out << "  (" << section;
        for (const Signature &s : sigs) {
            out << " (" << s.name;
            if (!s.params.empty()) {
                out << " ";
                print_typed_list(out, s.params);
            }
            out << ")";
        }
        out << ")\n";
    };
    print_signatures(":predicates", dom.predicates);
    if (!dom.functions.empty())
        print_signatures(":functions", dom.functions);
    for (const ActionSchema &s : dom.schemas) {
        out << "  (:action " << s.name << "\n    :parameters (";
        print_typed_list(out, s.params);
        out << ")\n    :precondition (and";
        for (const AtomTemplate &a : s.positive_pre) {
            out << " ";
            print_atom(out, a);
        }
        for (const AtomTemplate &a : s.negative_pre) {
            out << " (not ";
            print_atom(out, a);
            out << ")";
        }
        for (const EqualityConstraint &eq : s.equalities)
            out << (eq.negated ? " (not (= " : " (= ") << eq.lhs << " " << eq.rhs
                << (eq.negated ? "))" : ")");
        for (const NumericPreconditionTemplate &n : s.numeric_pre) {
            out << " (>= ";
            print_term(out, n.term);
            out << " " << pddl_number(n.bound) << ")";
        }
        out << ")\n    :effect (and";
        for (const AtomTemplate &a : s.add_effects) {
            out << " ";
            print_atom(out, a);
        }
        for (const AtomTemplate &a : s.delete_effects) {
            out << " (not ";
            print_atom(out, a);
            out << ")";
        }
        for (const NumericEffectTemplate &n : s.numeric_effects) {
            out << " (" << to_string(n.op) << " ";
            print_term(out, n.term);
            out << " " << pddl_number(n.amount) << ")";
        }
        out << "))\n";
    }
    out << ")\n";
    return out.str();
}

string print_problem(const ProblemInstance &prob) {
    ostringstream out;
    out << "(define (problem " << prob.name << ")\n";
    out << "  (:domain " << prob.domain_name << ")\n";
    if (!prob.objects.empty()) {
        out << "  (:objects ";
        print_typed_list(out, prob.objects);
        out << ")\n";
    }
    out << "  (:init";
    for (const string &a : prob.init_atoms)
        out << " " << pddl_form(a);
    for (const auto &[fluent, value] : prob.init_fluents)
        out << " (= " << pddl_form(fluent) << " " << pddl_number(value) << ")";
    out << ")\n  (:goal (and";
    for (const string &g : prob.goal)
        out << " " << pddl_form(g);
    out << ")))\n";
    return out.str();
}

string canonical_term(string_view name, const vector<string> &args) {
    string result(name);
    if (args.empty())
        return result;
    result += '(';
    for (size_t i = 0; i < args.size(); ++i) {
        if (i)
            result += ',';
        result += args[i];
    }
    result += ')';
    return result;
}

ParsedTerm parse_term(string_view text) {
    auto trim = [](string_view s) {
        while (!s.empty() && isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };
    auto lower = [](string_view s) {
        string r(s);
        for (char &c : r)
            c = static_cast<char>(tolower(static_cast<unsigned char>(c)));
        return r;
    };
    auto valid_name = [](string_view s) {
        return !s.empty() && none_of(s.begin(), s.end(), [](char c) {
            return c == '(' || c == ')' || c == ',' || c == ';' ||
                   isspace(static_cast<unsigned char>(c));
        });
    };
    string_view t = trim(text);
    ParsedTerm term;
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')')
            throw InvalidCommand("malformed term '" + string(text) + "'");
        istringstream in{string(t.substr(1, t.size() - 2))};
        string word;
        while (in >> word) {
            if (!valid_name(word))
                throw InvalidCommand("malformed term '" + string(text) + "'");
            if (term.name.empty())
                term.name = lower(word);
            else
                term.args.push_back(lower(word));
        }
    } else {
        size_t open = t.find('(');
        if (open == string_view::npos) {
            term.name = lower(t);
        } else {
            if (t.back() != ')')
                throw InvalidCommand("malformed term '" + string(text) + "'");
            term.name = lower(trim(t.substr(0, open)));
            string_view inner = t.substr(open + 1, t.size() - open - 2);
            if (!trim(inner).empty()) {
                size_t start = 0;
                while (true) {
                    size_t comma = inner.find(',', start);
                    string_view piece = trim(inner.substr(
                        start, comma == string_view::npos ? string_view::npos : comma - start));
                    if (!valid_name(piece))
                        throw InvalidCommand("malformed term '" + string(text) + "'");
                    term.args.push_back(lower(piece));
                    if (comma == string_view::npos)
                        break;
                    start = comma + 1;
                }
            }
        }
    }
    if (!valid_name(term.name))
        throw InvalidCommand("malformed term '" + string(text) + "'");
    return term;
}

namespace {
string check_ground(const ProblemInstance &prob, const DomainModel &dom,
                    const Signature *sig, const ParsedTerm &term, const char *what) {
    if (!sig)
        throw SemanticError(string("unknown ") + what + " '" + term.name + "'");
    if (term.args.size() != sig->params.size())
        throw SemanticError("'" + term.name + "' expects " + to_string(sig->params.size()) +
                            " arguments, got " + to_string(term.args.size()));
    for (size_t i = 0; i < term.args.size(); ++i) {
        const TypedName *obj = prob.find_object(term.args[i]);
        if (!obj)
            throw SemanticError("unknown object '" + term.args[i] + "'");
        if (!dom.is_subtype(obj->type, sig->params[i].type))
            throw SemanticError("object '" + term.args[i] + "' of type " + obj->type +
                                " does not match parameter type " + sig->params[i].type);
    }
    return canonical_term(term.name, term.args);
}
}

string check_ground_atom(const DomainModel &dom, const ProblemInstance &prob, string_view text) {
    ParsedTerm term = parse_term(text);
    return check_ground(prob, dom, dom.find_predicate(term.name), term, "predicate");
}

string check_ground_fluent(const DomainModel &dom, const ProblemInstance &prob,
                           string_view text) {
    ParsedTerm term = parse_term(text);
    return check_ground(prob, dom, dom.find_function(term.name), term, "resource function");
}
}
