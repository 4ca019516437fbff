#!/usr/bin/env python3
# Copyright ffgmc authors
# SPDX-License-Identifier: Apache-2.0
"""Run an SMT-LIB 2 file through the cvc5 Python bindings.

Usage: cvc5_smt2.py [--model] [--opt name=value ...] FILE

Prints what the cvc5 binary would print for each command. Exits 127 when
the bindings are not importable, so callers can tell "no solver" apart
from "solver failed".
"""

import argparse
import sys

try:
    import cvc5
except ImportError:
    print("cvc5 python bindings not installed", file=sys.stderr)
    sys.exit(127)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("file")
    ap.add_argument("--model", action="store_true",
                    help="print the model after a sat answer")
    ap.add_argument("--opt", action="append", default=[],
                    help="solver option name=value, e.g. sets-exp=true")
    args = ap.parse_args()

    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    for opt in args.opt:
        name, _, value = opt.partition("=")
        solver.setOption(name, value or "true")
    sm = cvc5.SymbolManager(tm)
    parser = cvc5.InputParser(solver, sm)
    parser.setFileInput(cvc5.InputLanguage.SMT_LIB_2_6, args.file)

    last = None
    while True:
        cmd = parser.nextCommand()
        if cmd.isNull():
            break
        out = cmd.invoke(solver, sm)
        if out:
            sys.stdout.write(out if out.endswith("\n") else out + "\n")
            sys.stdout.flush()
        if cmd.getCommandName() == "check-sat":
            last = out.strip() if out else None
    if args.model and last == "sat":
        sys.stdout.write(
            solver.getModel(
                [s for s in sm.getDeclaredSorts()],
                [t for t in sm.getDeclaredTerms()]) + "\n")


if __name__ == "__main__":
    main()
