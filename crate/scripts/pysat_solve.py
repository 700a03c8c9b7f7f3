#!/usr/bin/env python3
"""Solve a DIMACS file with a python-sat backend and print competition-style output.

Usage: pysat_solve.py [--backend NAME] FILE.cnf
"""
import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--backend", default="cadical153")
    ap.add_argument("cnf")
    args = ap.parse_args()
    formula = CNF(from_file=args.cnf)
    with Solver(name=args.backend, bootstrap_with=formula.clauses) as s:
        if s.solve():
            print("s SATISFIABLE")
            model = s.get_model() or []
            print("v " + " ".join(map(str, model)) + " 0")
            return 10
        print("s UNSATISFIABLE")
        return 20


if __name__ == "__main__":
    sys.exit(main())
