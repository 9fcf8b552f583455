#!/usr/bin/env python3
"""Minimal external QBF solver for bridge tests: QDIMACS on stdin,
SAT/UNSAT on stdout, exit code 10/20.  Naive expansion; free variables
count as outermost existentials."""
import sys


def reduce(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        out.append([l for l in c if l != -lit])
    return out


def solve(prefix, clauses):
    if any(not c for c in clauses):
        return False
    if not clauses:
        return True
    if not prefix:
        return True  # no empty clause and every var decided
    q, block = prefix[0]
    if not block:
        return solve(prefix[1:], clauses)
    var, rest = block[0], [(q, block[1:])] + list(prefix[1:])
    pos_branch = solve(rest, reduce(clauses, var))
    if q == "e" and pos_branch:
        return True
    if q == "a" and not pos_branch:
        return False
    return solve(rest, reduce(clauses, -var))


def main():
    prefix = []
    clauses = []
    nvars = 0
    for line in sys.stdin:
        line = line.strip()
        if not line or line[0] == "c":
            continue
        if line[0] == "p":
            nvars = int(line.split()[2])
            continue
        if line[0] in "ea":
            block = [int(t) for t in line.split()[1:] if int(t) != 0]
            prefix.append((line[0], block))
            continue
        clauses.append([int(t) for t in line.split() if int(t) != 0])
    bound = {abs(v) for _, block in prefix for v in block}
    free = [v for v in range(1, nvars + 1) if v not in bound]
    if free:
        prefix.insert(0, ("e", free))
    if solve(prefix, clauses):
        print("SAT")
        sys.exit(10)
    print("UNSAT")
    sys.exit(20)


if __name__ == "__main__":
    main()
