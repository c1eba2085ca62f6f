"""Deterministic toy-program generators for end-to-end fixtures.

Class 1 programs contain a while loop; class 0 programs use only
straight-line arithmetic. A bag-of-node-kind victim separates the two
perfectly, and inserting any while-rooted dead pattern flips class 0.
"""

from random import Random

from astveil.graphs import SourceUnit

NAMES = ["acc", "base", "count", "delta", "extra", "flag", "grand", "high"]


def _body_lines(rng: Random, names: list[str]) -> list[str]:
    lines = []
    for _ in range(rng.randint(2, 4)):
        a, b = rng.choice(names), rng.choice(names)
        op = rng.choice(["+", "-", "*"])
        lines.append(f"    {a} = {a} {op} {b};")
    return lines


def make_unit(uid: str, label: int, rng: Random) -> SourceUnit:
    names = rng.sample(NAMES, 3)
    decls = [f"    int {n} = {rng.randint(0, 9)};" for n in names]
    body = _body_lines(rng, names)
    if label == 1:
        v = rng.choice(names)
        loop = [
            f"    while ({v} > 0) {{",
            f"        {v} = {v} - 1;",
            "    }",
        ]
        body = body[:1] + loop + body[1:]
    lines = [f"int fn_{uid}() {{"] + decls + body + [f"    return {names[0]};", "}", ""]
    return SourceUnit(uid, "c", "\n".join(lines), label_hint=label)


def make_corpus(seed: int, n_per_class: int, prefix: str = "u") -> list[SourceUnit]:
    rng = Random(seed)
    units = []
    for i in range(n_per_class):
        units.append(make_unit(f"{prefix}{2 * i:04d}", 0, rng))
        units.append(make_unit(f"{prefix}{2 * i + 1:04d}", 1, rng))
    return units
