#!/usr/bin/env python3
"""Recomputes the frozen fixture values in tests/data/derived.txt.

Plain forward chaining over ABox facts; shares nothing with the C++ code.
Handles only what the fixtures use: concept and role assertions, atomic and
binary-conjunction GCIs, `exists r . A <= B` and plain role inclusions.
"""
import itertools
import re
import sys
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name):
    axioms = []
    for line in (DATA / name).read_text().splitlines():
        line = line.split("#")[0].strip()
        if not line:
            continue
        body, var = (s.strip() for s in line.split("@"))
        axioms.append((body, var))
    return axioms


def role_names(axioms):
    return {m[1] for body, _ in axioms for m in [re.fullmatch(r"(\w+)\(\w+,\w+\)", body)] if m}


def closure(axioms, facts):
    concepts, roles = set(facts[0]), set(facts[1])
    while True:
        before = (len(concepts), len(roles))
        for body, _ in axioms:
            if m := re.fullmatch(r"(\w+)\((\w+)\)", body):
                concepts.add((m[1], m[2]))
            elif m := re.fullmatch(r"(\w+)\((\w+),(\w+)\)", body):
                roles.add((m[1], m[2], m[3]))
            elif m := re.fullmatch(r"exists (\w+) \. (\w+) <= (\w+)", body):
                for r, a, b in list(roles):
                    if r == m[1] and (m[2], b) in concepts:
                        concepts.add((m[3], a))
            elif m := re.fullmatch(r"(\w+) and (\w+) <= (\w+)", body):
                for c, a in list(concepts):
                    if c == m[1] and (m[2], a) in concepts:
                        concepts.add((m[3], a))
            elif m := re.fullmatch(r"(\w+) <= (\w+)", body):
                if m[1] in role_names(axioms):
                    for r, a, b in list(roles):
                        if r == m[1]:
                            roles.add((m[2], a, b))
                for c, a in list(concepts):
                    if c == m[1]:
                        concepts.add((m[2], a))
            else:
                sys.exit("unsupported axiom: " + body)
        if (len(concepts), len(roles)) == before:
            return concepts, roles


def minimal_sets(axioms, entails):
    found = []
    for k in range(len(axioms) + 1):
        for sub in itertools.combinations(range(len(axioms)), k):
            if any(set(f) <= set(sub) for f in found):
                continue
            if entails([axioms[i] for i in sub]):
                found.append(sub)
    return sorted("*".join(sorted(axioms[i][1] for i in s)) for s in found)


def concept_goal(c, ind):
    return lambda sub: (c, ind) in closure(sub, (set(), set()))[0]


def subsumption_goal(a, b):
    return lambda sub: (b, "_a0") in closure(sub, ({(a, "_a0")}, set()))[0]


def dio_query(sub):
    concepts, roles = closure(sub, (set(), set()))
    return ("Deity", "dionysus") in concepts and any(r == "parent" and x == "dionysus" for r, x, _ in roles)


def minimize(monos):
    sets = [frozenset(m.split("*")) for m in monos]
    keep = [s for s in sets if not any(o < s for o in sets)]
    return sorted("*".join(sorted(s)) for s in set(keep))


def main():
    dio, cyc, idem = load("dio.onto"), load("cyc.onto"), load("idem.onto")
    fuzzy = dict(line.split("=") for line in (DATA / "dio_fuzzy.val").read_text().split("\n") if "=" in line)
    fuzzy = {k.strip(): float(v) for k, v in fuzzy.items()}
    q9 = ("x1*x2*y2 x1*x3*y2 x1*x5*y3 x2*x3*x4*y1*y2 x3*x4*y1*y2 x3*x4*x5*y1*y2*y3 "
          "x2*x5*x6*y1*y2*y3 x3*x5*x6*y1*y2*y3 x5*x6*y1*y3").split()
    out = []
    out.append("dio Deity(dionysus): " + " + ".join(minimal_sets(dio, concept_goal("Deity", "dionysus"))))
    out.append("dio Deity(semele): " + (" + ".join(minimal_sets(dio, concept_goal("Deity", "semele"))) or "0"))
    out.append("dio q(dionysus): " + " + ".join(minimal_sets(dio, dio_query)))
    out.append("minimize q9: " + " + ".join(minimize(q9)))
    out.append("cyc A <= B: " + " + ".join(minimal_sets(cyc, subsumption_goal("A", "B"))))
    out.append("idem A <= C: " + " + ".join(minimal_sets(idem, subsumption_goal("A", "C"))))
    lineage = sorted({v for m in minimal_sets(dio, concept_goal("Deity", "dionysus")) for v in m.split("*")})
    out.append("dio lineage Deity(dionysus): " + " ".join(lineage))
    out.append("dio ncut 0.9 size: " + str(sum(1 for _, v in dio if fuzzy[v] >= 0.9)))
    for n in range(1, 11):
        t = n / 10
        cut = [a for a in dio if fuzzy[a[1]] >= t]
        concepts, roles = closure(cut, (set(), set()))
        derived = sorted(f"{c}({a})" for c, a in concepts)
        out.append(f"dio ncut {t:.1f} entails: " + " ".join(derived) + (" | q" if dio_query(cut) else ""))
    text = "\n".join(out) + "\n"
    if len(sys.argv) == 3 and sys.argv[1] == "--check":
        frozen = Path(sys.argv[2]).read_text()
        if frozen != text:
            sys.exit("derived values differ from " + sys.argv[2])
        print("frozen values match")
        return
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
