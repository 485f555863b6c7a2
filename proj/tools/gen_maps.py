#!/usr/bin/env python3
"""Regenerates the bundled maps and suites under data/. Output is deterministic."""
import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"

BENCH_CLASSES = [
    ("chair", "c"), ("table", "t"), ("sofa", "s"), ("plant", "p"), ("lamp", "l"),
    ("shelf", "h"), ("bed", "b"), ("desk", "d"), ("bin", "n"), ("box", "x"),
]


def write_ascii(path, rows, resolution, legend, start=None, ro=None, comment=None):
    lines = []
    if comment:
        lines.append(f"% {comment}")
    lines.append(f"resolution={resolution}")
    if ro is not None:
        lines.append(f"ro={ro}")
    if start is not None:
        lines.append(f"start={start[0]},{start[1]}")
    for ch, spec in legend:
        lines.append(f"legend: {ch}={spec}")
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n")


def free_cells(grid):
    return [(x, y) for y, row in enumerate(grid) for x, c in enumerate(row) if c == "."]


def bench_map(rng, idx):
    w = rng.randint(12, 40)
    h = rng.randint(12, 40)
    grid = [["." for _ in range(w)] for _ in range(h)]
    # walls with gaps
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.5:
            y = rng.randrange(2, h - 2)
            gap = rng.randrange(0, w)
            for x in range(w):
                if abs(x - gap) > 1:
                    grid[y][x] = "#"
        else:
            x = rng.randrange(2, w - 2)
            gap = rng.randrange(0, h)
            for y in range(h):
                if abs(y - gap) > 1:
                    grid[y][x] = "#"
    # clutter
    for _ in range(rng.randint(0, w * h // 40)):
        grid[rng.randrange(h)][rng.randrange(w)] = "#"
    # unknown patch
    if rng.random() < 0.4:
        x0, y0 = rng.randrange(w - 3), rng.randrange(h - 3)
        for y in range(y0, y0 + 3):
            for x in range(x0, x0 + 3):
                grid[y][x] = "?"
    k = rng.randint(3, 5)
    classes = rng.sample(BENCH_CLASSES, k)
    legend = []
    for i, (name, ch) in enumerate(classes):
        radius = rng.choice([None, 0.5, 1.0, 1.5])
        walkable = rng.random() < 0.2
        spec = f"{name},id=object_{i + 1}"
        if radius is not None:
            spec += f",r={radius}"
        if walkable:
            spec += ",walkable"
        legend.append((ch, spec))
        for _ in range(rng.randint(1, 3)):
            bw, bh = rng.randint(1, 3), rng.randint(1, 3)
            x0, y0 = rng.randrange(w - bw + 1), rng.randrange(h - bh + 1)
            for y in range(y0, y0 + bh):
                for x in range(x0, x0 + bw):
                    grid[y][x] = ch
    start = rng.choice(free_cells(grid))
    rows = ["".join(r) for r in grid]
    write_ascii(DATA / "maps" / f"bench_{idx:02d}.map", rows, 0.5, legend, start=start,
                comment=f"generated benchmark map {idx}")


def corridor():
    rows = ["#" * 11, "#........o#", "#" * 11]
    # cells 1..8 free along y=1; the object sits at x=9
    write_ascii(DATA / "maps" / "corridor.map", rows, 1.0, [("o", "beacon,id=object_1,r=1.0")], start=(1, 1),
                ro=0.0, comment="straight corridor; F object_1 from (1,1) costs 7 cells")


KITCHEN = [
    "##########################",
    "#r.......#.......s.......#",
    "#r.......#.......s.......#",
    "#........#...............#",
    "#...................b....#",
    "#........#...............#",
    "#####.####.......#########",
    "#........#...............#",
    "#..tt....#.......y.......#",
    "#..tt....#...............#",
    "#............k...........#",
    "#........#...............#",
    "##########################",
]


def kitchen():
    legend = [
        ("r", "refrigerator,id=object_28,alias=fridge"),
        ("s", "sink,id=object_12"),
        ("b", "bottle,id=object_31,alias=the bottle"),
        ("t", "table,id=object_5,alias=dining table"),
        ("y", "teddy_bear,id=object_36,alias=the teddy bear|teddy"),
        ("k", "sofa,id=object_40,alias=couch"),
    ]
    write_ascii(DATA / "maps" / "kitchen.map", KITCHEN, 0.5, legend, start=(5, 3), comment="apartment with kitchen")


def gtb_blocked():
    rows = [
        "###############",
        "#.............#",
        "#..1..........#",
        "#.........###.#",
        "#.........#3#.#",
        "#.........###.#",
        "#.....2.......#",
        "###############",
    ]
    legend = [(str(i), f"objective_{i},id=object_{i},r=0,walkable") for i in (1, 2, 3)]
    write_ascii(DATA / "maps" / "gtb_blocked.map", rows, 1.0, legend, start=(1, 1),
                comment="objective_3 is walled in")


def mini_suite(rng):
    suite_dir = DATA / "suites" / "mini"
    suite_dir.mkdir(parents=True, exist_ok=True)
    tasks = []
    for m in range(5):
        w, h = rng.randint(10, 20), rng.randint(10, 20)
        grid = [["." for _ in range(w)] for _ in range(h)]
        for x in range(w):
            grid[0][x] = grid[h - 1][x] = "#"
        for y in range(h):
            grid[y][0] = grid[y][w - 1] = "#"
        for _ in range(w * h // 12):
            grid[rng.randrange(1, h - 1)][rng.randrange(1, w - 1)] = "#"
        n_obj = 3 if m % 2 == 0 else 2
        cells = rng.sample(free_cells(grid), n_obj + 1)
        start, objs = cells[0], cells[1:]
        legend = []
        for i, (x, y) in enumerate(objs, start=1):
            grid[y][x] = str(i)
            legend.append((str(i), f"objective_{i},id=object_{i},r=0,walkable"))
        # keep the goals reachable
        for (x, y) in [start] + objs:
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    nx, ny = x + dx, y + dy
                    if 0 < nx < w - 1 and 0 < ny < h - 1 and grid[ny][nx] == "#":
                        grid[ny][nx] = "."
        rows = ["".join(r) for r in grid]
        name = f"mini_{m + 1}.map"
        write_ascii(suite_dir / name, rows, 1.0, legend, start=start, ro=0.0)
        ids = [f"object_{i}" for i in range(1, n_obj + 1)]
        formula = ids[-1]
        for obj in reversed(ids[:-1]):
            formula = f"& {obj} F {formula}"
        formula = f"F {formula}"
        tasks.append({
            "name": f"mini_{m + 1}",
            "map": name,
            "start": list(start),
            "ltl": formula,
            "objectives": [{"name": f"objective_{i}", "cell": list(c)} for i, c in enumerate(objs, start=1)],
        })
    (suite_dir / "suite.json").write_text(json.dumps({"tasks": tasks}, indent=2) + "\n")


def main():
    (DATA / "maps").mkdir(parents=True, exist_ok=True)
    rng = random.Random(20241018)
    for i in range(1, 21):
        bench_map(rng, i)
    corridor()
    kitchen()
    gtb_blocked()
    mini_suite(random.Random(7))


if __name__ == "__main__":
    main()
