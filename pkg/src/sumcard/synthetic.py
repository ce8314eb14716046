"""Small fixtures and synthetic graph generators used by tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .query import Query, parse_query
from .rdf import RDF_TYPE, Dictionary, RdfGraph
from .summary import Summary, summarize_graph

# -- the employees/cars example ----------------------------------------------

EMPLOYEE_EDGES = [
    ("e1", "manages", "e2"),
    ("e1", "manages", "e3"),
    ("e2", "manages", "e4"),
    ("e3", "owns", "c3"),
    ("e4", "owns", "c4"),
    ("e2", "owns", "c1"),
    ("e4", "owns", "c2"),
]
EMPLOYEE_CLASSES = {
    "e1": "Single", "e2": "Single",
    "e3": "Married", "e4": "Married",
    "c1": "Roadster", "c2": "Roadster",
    "c3": "Van", "c4": "Van",
}
EMPLOYEE_BUCKETS = {
    "e1": "b1", "e2": "b1",
    "c1": "b2", "c2": "b2",
    "e3": "b3", "e4": "b3",
    "c3": "b4", "c4": "b4",
}

Q1 = "<e1> <manages> <e3> .\n<e3> <owns> <c3> .\n"
Q2 = "?x <manages> ?y .\n?y <owns> ?z .\n"
Q3 = "<e3> <owns> ?x .\n<e3> <owns> ?y .\n"
Q4 = "<e3> <owns> ?x .\n<e4> <owns> ?y .\n"


def iri(name: str) -> str:
    return f"<{name}>"


def employees_ntriples(with_types: bool = True) -> str:
    lines = [f"<{s}> <{p}> <{o}> .\n" for s, p, o in EMPLOYEE_EDGES]
    if with_types:
        lines += [f"<{r}> {RDF_TYPE} <{c}> .\n" for r, c in EMPLOYEE_CLASSES.items()]
    return "".join(lines)


def employees_graph(with_types: bool = True, dictionary: Dictionary | None = None) -> RdfGraph:
    d = dictionary if dictionary is not None else Dictionary()
    triples = [tuple(d.intern(iri(t)) for t in e) for e in EMPLOYEE_EDGES]
    if with_types:
        rdf_type = d.intern(RDF_TYPE)
        triples += [(d.intern(iri(r)), rdf_type, d.intern(iri(c))) for r, c in EMPLOYEE_CLASSES.items()]
    return RdfGraph(triples, d)


def employees_mu(g: RdfGraph) -> dict[int, int]:
    """The drawn bucketing: four two-element buckets, identity elsewhere."""
    d = g.dictionary
    mu = {r: r for r in g.resources()}
    for r, b in EMPLOYEE_BUCKETS.items():
        mu[d.intern(iri(r))] = d.intern(iri(b))
    return mu


def employees_summary(with_types: bool = True) -> tuple[RdfGraph, Summary]:
    g = employees_graph(with_types)
    return g, summarize_graph(g, employees_mu(g))


def employees_queries(d: Dictionary) -> dict[str, Query]:
    return {name: parse_query(text, d) for name, text in (("q1", Q1), ("q2", Q2), ("q3", Q3), ("q4", Q4))}


# -- LUBM-like university data -----------------------------------------------

UB = "http://lubm.example/ub#"


@dataclass
class UniversitySpec:
    universities: int = 1
    departments: int = 4
    professors: int = 8
    students: int = 60
    courses: int = 12
    courses_per_student: int = 3
    seed: int = 0


def _u(name: str) -> str:
    return f"<{UB}{name}>"


def university_ntriples(spec: UniversitySpec = UniversitySpec()) -> str:
    """A scaled-down university graph in the spirit of the LUBM benchmark."""
    rng = random.Random(spec.seed)
    out: list[str] = []
    typ = RDF_TYPE

    def add(s: str, p: str, o: str) -> None:
        out.append(f"{s} {p} {o} .\n")

    for u in range(spec.universities):
        univ = f"<http://www.univ{u}.example/>"
        add(univ, typ, _u("University"))
        for dept in range(spec.departments):
            base = f"http://www.dept{dept}.univ{u}.example/"
            d = f"<{base}>"
            add(d, typ, _u("Department"))
            add(d, _u("subOrganizationOf"), univ)
            profs = []
            for i in range(spec.professors):
                p = f"<{base}Professor{i}>"
                profs.append(p)
                add(p, typ, _u(rng.choice(["FullProfessor", "AssociateProfessor", "AssistantProfessor"])))
                add(p, _u("worksFor"), d)
                add(p, _u("degreeFrom"), f"<http://www.univ{rng.randrange(spec.universities + 3)}.example/>")
                add(p, _u("emailAddress"), f'"prof{i}@dept{dept}.univ{u}"')
            courses = []
            for i in range(spec.courses):
                c = f"<{base}Course{i}>"
                courses.append(c)
                add(c, typ, _u("GraduateCourse" if i % 3 == 0 else "Course"))
                add(profs[i % len(profs)], _u("teacherOf"), c)
            for i in range(spec.students):
                st = f"<{base}Student{i}>"
                graduate = i % 4 == 0
                add(st, typ, _u("GraduateStudent" if graduate else "UndergraduateStudent"))
                add(st, _u("memberOf"), d)
                add(st, _u("emailAddress"), f'"student{i}@dept{dept}.univ{u}"')
                for c in rng.sample(courses, spec.courses_per_student):
                    add(st, _u("takesCourse"), c)
                if graduate:
                    add(st, _u("advisor"), rng.choice(profs))
    return "".join(out)


UNIVERSITY_QUERIES = {
    # star queries
    "s01": "?s <{ub}takesCourse> ?c .\n?s <{ub}memberOf> ?d .\n",
    "s02": "?s <{rdf}> <{ub}GraduateStudent> .\n?s <{ub}advisor> ?p .\n",
    "s03": "?p <{ub}worksFor> ?d .\n?p <{ub}teacherOf> ?c .\n",
    "s04": "?p <{rdf}> <{ub}FullProfessor> .\n?p <{ub}worksFor> ?d .\n",
    "s05": "?s <{ub}memberOf> ?d .\n?s <{ub}emailAddress> ?e .\n",
    "s06": "?p <{ub}degreeFrom> ?u .\n?p <{ub}worksFor> ?d .\n?p <{ub}emailAddress> ?e .\n",
    "s07": "?c <{rdf}> <{ub}GraduateCourse> .\n",
    "s08": "?s <{rdf}> <{ub}UndergraduateStudent> .\n?s <{ub}takesCourse> ?c .\n",
    "s09": "?d <{rdf}> <{ub}Department> .\n?d <{ub}subOrganizationOf> ?u .\n",
    "s10": "?s <{ub}advisor> ?p .\n?s <{ub}takesCourse> ?c .\n",
    # linear (path) queries
    "l01": "?s <{ub}takesCourse> ?c .\n?p <{ub}teacherOf> ?c .\n",
    "l02": "?s <{ub}advisor> ?p .\n?p <{ub}worksFor> ?d .\n",
    "l03": "?s <{ub}memberOf> ?d .\n?d <{ub}subOrganizationOf> ?u .\n",
    "l04": "?p <{ub}worksFor> ?d .\n?d <{ub}subOrganizationOf> ?u .\n",
    "l05": "?s <{ub}advisor> ?p .\n?p <{ub}teacherOf> ?c .\n",
    "l06": "?p <{ub}teacherOf> ?c .\n?c <{rdf}> <{ub}GraduateCourse> .\n",
    "l07": "?s <{ub}advisor> ?p .\n?p <{ub}degreeFrom> ?u .\n",
    "l08": "?s <{ub}takesCourse> ?c .\n?p <{ub}teacherOf> ?c .\n?p <{ub}worksFor> ?d .\n",
    "l09": "?s <{ub}advisor> ?p .\n?p <{ub}worksFor> ?d .\n?d <{ub}subOrganizationOf> ?u .\n",
    "l10": "?s <{ub}memberOf> ?d .\n?p <{ub}worksFor> ?d .\n",
}


def university_queries() -> dict[str, str]:
    rdf = RDF_TYPE[1:-1]
    return {k: v.format(ub=UB, rdf=rdf) for k, v in UNIVERSITY_QUERIES.items()}


# -- random graphs -----------------------------------------------------------

def two_community_ntriples(per_group: int = 100, edges: int = 3000, p_intra: float = 0.95,
                           seed: int = 0) -> str:
    """Two groups of resources with dense intra-group ``p`` edges and a few cross edges."""
    rng = random.Random(seed)
    groups = [[f"<http://c.example/g{g}/r{i}>" for i in range(per_group)] for g in range(2)]
    triples = set()
    for g, members in enumerate(groups):
        for r in members:
            triples.add(f"{r} {RDF_TYPE} <http://c.example/Node> .\n")
    attempts = 0
    while len(triples) < edges + 2 * per_group and attempts < 50 * edges:
        attempts += 1
        g = rng.randrange(2)
        s = rng.choice(groups[g])
        o = rng.choice(groups[g] if rng.random() < p_intra else groups[1 - g])
        triples.add(f"{s} <http://c.example/p> {o} .\n")
    return "".join(sorted(triples))


def random_ntriples(n_resources: int, n_predicates: int, n_triples: int, n_classes: int = 3,
                    seed: int = 0) -> str:
    rng = random.Random(seed)
    res = [f"<http://r.example/n{i}>" for i in range(n_resources)]
    preds = [f"<http://r.example/p{i}>" for i in range(n_predicates)]
    classes = [f"<http://r.example/C{i}>" for i in range(n_classes)]
    lines = set()
    for r in res:
        if n_classes and rng.random() < 0.7:
            lines.add(f"{r} {RDF_TYPE} {rng.choice(classes)} .\n")
    target = n_triples
    attempts = 0
    while len(lines) < target and attempts < 20 * target:
        attempts += 1
        s = rng.choice(res)
        o = f'"{rng.randrange(5)}"' if rng.random() < 0.1 else rng.choice(res)
        lines.add(f"{s} {rng.choice(preds)} {o} .\n")
    return "".join(sorted(lines))
