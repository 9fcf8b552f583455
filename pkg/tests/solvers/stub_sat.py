#!/usr/bin/env python3
"""Minimal external SAT solver for bridge tests: DIMACS on stdin,
's SATISFIABLE'/'s UNSATISFIABLE' on stdout, exit code 10/20."""
import sys


def solve(clauses):
    clauses = [c for c in clauses]
    assign = {}
    return dpll(clauses, assign)


def reduce(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        out.append([l for l in c if l != -lit])
    return out


def dpll(clauses, assign):
    while True:
        if any(not c for c in clauses):
            return False
        units = [c[0] for c in clauses if len(c) == 1]
        if not units:
            break
        clauses = reduce(clauses, units[0])
    if not clauses:
        return True
    var = abs(clauses[0][0])
    return dpll(reduce(clauses, var), {}) or dpll(reduce(clauses, -var), {})


def main():
    clauses = []
    for line in sys.stdin:
        line = line.strip()
        if not line or line[0] in "cp":
            continue
        lits = [int(t) for t in line.split()]
        clauses.append([l for l in lits if l != 0])
    if solve(clauses):
        print("s SATISFIABLE")
        sys.exit(10)
    print("s UNSATISFIABLE")
    sys.exit(20)


if __name__ == "__main__":
    main()
