#include "fixtures.h"
#include "random_strips.h"

#include "radar/errors.h"
#include "radar/pddl.h"

#include <doctest.h>

using namespace std;
using namespace radar;
using namespace radar::test;

namespace {
DomainModel firefighting() {
    return parse_domain(read_data("firefighting/domain.pddl"));
}

template<typename E>
E expect_error(const function<void()> &f) {
    try {
        f();
    } catch (const E &e) {
        return e;
    }
    FAIL("expected an exception");
    throw logic_error("unreachable");
}
}

TEST_CASE("bundled firefighting domain") {
    DomainModel d = firefighting();
    CHECK(d.name == "firefighting");
    CHECK(d.schemas.size() == 7);
    CHECK(d.functions.size() == 3);
    CHECK(d.find_function("available-big") != nullptr);
    CHECK(d.constants.size() == 3);
    const ActionSchema *dispatch = d.find_schema("dispatch-big-engines");
    REQUIRE(dispatch != nullptr);
    REQUIRE(dispatch->numeric_pre.size() == 1);
    CHECK(dispatch->numeric_pre[0].bound == Quantity(2));
    REQUIRE(dispatch->numeric_effects.size() == 1);
    CHECK(dispatch->numeric_effects[0].op == NumericOp::Decrease);
    CHECK(d.static_predicates() == set<string>{"station-open"});
}

TEST_CASE("minimal legal domain") {
    DomainModel d = parse_domain("(define (domain d) (:predicates (p)))");
    CHECK(d.name == "d");
    CHECK(d.predicates.size() == 1);
    CHECK(d.schemas.empty());
}

TEST_CASE("bundled scenario problems") {
    DomainModel d = firefighting();
    ProblemInstance p1 = parse_problem(read_data("firefighting/scenario1.pddl"), d);
    CHECK(p1.goal == set<string>{"fire-out"});
    CHECK(p1.init_fluents.at("available-big(station1)") == Quantity(1));
    CHECK(p1.init_fluents.at("available-small(station1)") == Quantity(1));
    CHECK(p1.init_atoms.count("fire-small") == 1);
    CHECK(p1.find_object("big-engines") != nullptr);

    ProblemInstance p2 = parse_problem(read_data("firefighting/scenario2.pddl"), d);
    CHECK(p2.init_atoms.count("fire-big") == 1);
    CHECK(p2.init_fluents.at("available-rescuer(station1)") == Quantity(2));
}

TEST_CASE("problem with an unreachable goal still parses") {
    DomainModel d = parse_domain(
        "(define (domain d) (:predicates (p) (q)) (:action a :parameters () "
        ":precondition (p) :effect (p)))");
    ProblemInstance p = parse_problem("(define (problem x) (:domain d) (:init) (:goal (q)))", d);
    CHECK(p.goal == set<string>{"q"});
    CHECK(p.init_atoms.empty());
}

TEST_CASE("syntax errors carry positions") {
    SyntaxError e = expect_error<SyntaxError>([] {
        parse_domain("(define (domain d)\n  (:predicates (p)\n");
    });
    CHECK(e.line() == 2);
    CHECK(e.code() == "SyntaxError");
    CHECK(string(e.what()).find("2:") == 0);

    SyntaxError extra = expect_error<SyntaxError>([] {
        parse_domain("(define (domain d) (:predicates (p))))");
    });
    CHECK(extra.line() == 1);
    CHECK(extra.column() > 30);
}

TEST_CASE("unsupported features are named") {
    UnsupportedFeature durative = expect_error<UnsupportedFeature>([] {
        parse_domain("(define (domain d) (:requirements :strips :durative-actions) "
                     "(:predicates (p)))");
    });
    CHECK(durative.feature() == ":durative-actions");
    CHECK(durative.code() == "UnsupportedFeature");

    UnsupportedFeature conditional = expect_error<UnsupportedFeature>([] {
        parse_domain("(define (domain d) (:predicates (p) (q)) (:action a :parameters () "
                     ":precondition (p) :effect (when (p) (q))))");
    });
    CHECK(conditional.feature() == ":conditional-effects");

    UnsupportedFeature greater = expect_error<UnsupportedFeature>([] {
        parse_domain("(define (domain d) (:requirements :fluents) (:predicates (p)) "
                     "(:functions (f)) (:action a :parameters () :precondition (> (f) 1) "
                     ":effect (p)))");
    });
    CHECK(greater.feature().find(">") != string::npos);

    UnsupportedFeature disjunction = expect_error<UnsupportedFeature>([] {
        parse_domain("(define (domain d) (:predicates (p) (q)) (:action a :parameters () "
                     ":precondition (or (p) (q)) :effect (p)))");
    });
    CHECK(disjunction.feature() == ":disjunctive-preconditions");
}

TEST_CASE("semantic errors") {
    DomainModel d = firefighting();
    SUBCASE("goal with an undeclared object") {
        expect_error<SemanticError>([&] {
            parse_problem("(define (problem x) (:domain firefighting) (:objects s - station) "
                          "(:init) (:goal (station-open nowhere)))", d);
        });
    }
    SUBCASE("goal with an undeclared predicate") {
        expect_error<SemanticError>([&] {
            parse_problem("(define (problem x) (:domain firefighting) (:init) "
                          "(:goal (burning)))", d);
        });
    }
    SUBCASE("object of unknown type") {
        expect_error<SemanticError>([&] {
            parse_problem("(define (problem x) (:domain firefighting) (:objects s - depot) "
                          "(:init) (:goal (fire-out)))", d);
        });
    }
    SUBCASE("arity mismatch") {
        expect_error<SemanticError>([] {
            parse_domain("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?y) "
                         ":precondition (p ?y ?y) :effect (p ?y)))");
        });
    }
    SUBCASE("undeclared type") {
        expect_error<SemanticError>([] {
            parse_domain("(define (domain d) (:requirements :typing) (:predicates (p ?x - t)))");
        });
    }
    SUBCASE("cyclic types") {
        expect_error<SemanticError>([] {
            parse_domain("(define (domain d) (:requirements :typing) (:types a - b b - a) "
                         "(:predicates (p)))");
        });
    }
    SUBCASE("duplicate schema") {
        expect_error<SemanticError>([] {
            parse_domain("(define (domain d) (:predicates (p)) "
                         "(:action a :parameters () :precondition (p) :effect (p)) "
                         "(:action a :parameters () :precondition (p) :effect (p)))");
        });
    }
    SUBCASE("free variable") {
        expect_error<SemanticError>([] {
            parse_domain("(define (domain d) (:predicates (p ?x)) (:action a :parameters () "
                         ":precondition (p ?z) :effect (p ?z)))");
        });
    }
    SUBCASE("atom both added and deleted") {
        expect_error<SemanticError>([] {
            parse_domain("(define (domain d) (:predicates (p)) (:action a :parameters () "
                         ":precondition (p) :effect (and (p) (not (p)))))");
        });
    }
    SUBCASE("wrong domain name") {
        expect_error<SemanticError>([&] {
            parse_problem("(define (problem x) (:domain other) (:init) (:goal (fire-out)))", d);
        });
    }
}

TEST_CASE("print and parse round trip") {
    SUBCASE("bundled files") {
        DomainModel d = firefighting();
        DomainModel again = parse_domain(print_domain(d));
        CHECK(again == d);
        for (const char *name : {"scenario1", "scenario2", "scenario2-small"}) {
            ProblemInstance p =
                parse_problem(read_data(string("firefighting/") + name + ".pddl"), d);
            CHECK(parse_problem(print_problem(p), again) == p);
        }
    }
    SUBCASE("generated domains") {
        for (uint64_t seed = 1; seed <= 200; ++seed) {
            StripsInstance task = random_instance(seed);
            DomainModel d = parse_domain(task.domain_text);
            DomainModel again = parse_domain(print_domain(d));
            CHECK_MESSAGE(again == d, "seed ", seed);
            ProblemInstance p = parse_problem(task.problem_text, d);
            CHECK_MESSAGE(parse_problem(print_problem(p), again) == p, "seed ", seed);
        }
    }
}

TEST_CASE("ground terms") {
    CHECK(canonical_term("fire-out", {}) == "fire-out");
    CHECK(canonical_term("on-scene", {"rescuers"}) == "on-scene(rescuers)");
    ParsedTerm t = parse_term("(Available-Big Station1)");
    CHECK(t.name == "available-big");
    CHECK(t.args == vector<string>{"station1"});
    ParsedTerm c = parse_term("on-scene(big-engines)");
    CHECK(c.name == "on-scene");
    CHECK(c.args == vector<string>{"big-engines"});
    CHECK_THROWS_AS(parse_term("on-scene(big-engines"), InvalidCommand);

    DomainModel d = firefighting();
    ProblemInstance p = parse_problem(read_data("firefighting/scenario1.pddl"), d);
    CHECK(check_ground_atom(d, p, "(on-scene rescuers)") == "on-scene(rescuers)");
    CHECK_THROWS_AS(check_ground_atom(d, p, "on-scene(station1)"), SemanticError);
    CHECK_THROWS_AS(check_ground_atom(d, p, "available-big(station1)"), SemanticError);
    CHECK(check_ground_fluent(d, p, "available-big(station1)") == "available-big(station1)");
    CHECK_THROWS_AS(check_ground_fluent(d, p, "fire-out"), SemanticError);
}

TEST_CASE("quantities") {
    CHECK(parse_quantity("3") == Quantity(3));
    CHECK(parse_quantity("2.5") == Quantity(5, 2));
    CHECK(parse_quantity("5/2") == Quantity(5, 2));
    CHECK(parse_quantity("-1") == Quantity(-1));
    CHECK(format_quantity(Quantity(5, 2)) == "5/2");
    CHECK(format_quantity(Quantity(4)) == "4");
    CHECK_THROWS_AS(parse_quantity("two"), invalid_argument);
    CHECK_THROWS_AS(parse_quantity("1/0"), invalid_argument);
}

TEST_CASE("the published subset description matches the parser") {
    nlohmann::json subset = nlohmann::json::parse(read_text(RADAR_DOCS_DIR_PATH "/pddl-subset.json"));
    for (const auto &entry : subset.at("supported")) {
        CAPTURE(entry.at("construct").get<string>());
        CHECK_NOTHROW(parse_domain(entry.at("domain").get<string>()));
    }
    DomainModel problem_domain = parse_domain(subset.at("problemDomain").get<string>());
    for (const auto &entry : subset.at("unsupported")) {
        string feature = entry.at("feature");
        CAPTURE(feature);
        try {
            if (entry.contains("domain"))
                parse_domain(entry.at("domain").get<string>());
            else
                parse_problem(entry.at("problem").get<string>(), problem_domain);
            FAIL("accepted");
        } catch (const UnsupportedFeature &e) {
            CHECK(e.feature() == feature);
        }
    }
    for (const auto &r : subset.at("requirements")) {
        string text = "(define (domain d) (:requirements " + r.get<string>() + "))";
        CHECK_NOTHROW(parse_domain(text));
    }
}
