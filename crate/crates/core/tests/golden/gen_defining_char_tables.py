"""Independent transcription of the defining-characteristic exception tables."""
import json


def two_simple_roots(p):
    a2_sc = 2 if p == 2 else (5 if p % 3 == 1 else 3)
    a2_ad = 2 if p == 2 else 3
    b2 = 1 if p in (2, 3) else 2
    g2 = 1 if p in (2, 3, 5) else 2
    return [
        ("A2(p)_sc", a2_sc),
        ("A2(p)_ad", a2_ad),
        ("B2(p)_sc", b2),
        ("B2(p)_ad", b2),
        ("G2(p)", g2),
    ]


def one_simple_root(p):
    if p == 2:
        u_sc, u_ad = 0, 0
    else:
        u_sc = 3 if p % 3 == 2 else 1
        u_ad = 1
    rows = [
        ("A1(p)_sc", 0),
        ("A1(p)_ad", 0),
        ("2A2(p)_sc", u_sc),
        ("2A2(p)_ad", u_ad),
    ]
    if p == 2:
        rows += [("2B2(2)", 0), ("2B2(8)", 1), ("2B2(32)", 1)]
    if p == 3:
        rows += [("2G2(3)", 1), ("2G2(27)", 1)]
    return rows


cells = []
for p in (2, 3, 5, 7, 11, 13):
    for table, rows in (("two-simple-roots", two_simple_roots(p)), ("one-simple-root", one_simple_root(p))):
        for group, rank in rows:
            cells.append({"table": table, "group": group, "p": p, "rank": rank})

with open("defining_char_tables.json", "w") as f:
    json.dump({"primes": [2, 3, 5, 7, 11, 13], "cells": cells}, f, indent=1)
    f.write("\n")
