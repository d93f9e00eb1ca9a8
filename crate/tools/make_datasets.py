#!/usr/bin/env python3
"""Regenerate the bundled datasets under data/.

- iris.data: the standard 150-row iris table (via scikit-learn, which ships
  the same content as the UCI file), written in UCI line format.
- tic-tac-toe.data: all 958 distinct final boards of tic-tac-toe with x
  moving first, derived by exhaustive game enumeration; class "positive"
  iff x has three in a row. Content matches the UCI endgame dataset up to
  row order (rows are sorted here).
- hepatitis.data: a synthetic stand-in with the UCI hepatitis column layout
  (20 comma-separated fields, class first, "?" for missing). The original
  file is not redistributed here; this one mimics its shape: 155 rows,
  32 die / 123 live, class-conditional numeric marginals, and realistic
  missing-value rates. One row carries the canonical demo values
  (bilirubin 0.90, alk phosphate 95, sgot 28, albumin 4.0, protime 75, live).
"""

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"


def write_iris():
    from sklearn.datasets import load_iris

    d = load_iris()
    lines = []
    for row, target in zip(d.data, d.target):
        vals = ",".join(f"{v:.1f}" for v in row)
        lines.append(f"{vals},Iris-{d.target_names[target]}")
    (OUT / "iris.data").write_text("\n".join(lines) + "\n")
    print(f"iris.data: {len(lines)} rows")


WIN_LINES = [
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
]


def winner(board):
    for a, b, c in WIN_LINES:
        if board[a] != "b" and board[a] == board[b] == board[c]:
            return board[a]
    return None


def write_tictactoe():
    finals = set()

    def play(board, player):
        w = winner(board)
        if w is not None or "b" not in board:
            finals.add(tuple(board))
            return
        for i in range(9):
            if board[i] == "b":
                board[i] = player
                play(board, "o" if player == "x" else "x")
                board[i] = "b"

    play(["b"] * 9, "x")
    rows = sorted(
        ",".join(board) + ("," + ("positive" if winner(board) == "x" else "negative"))
        for board in finals
    )
    assert len(rows) == 958, len(rows)
    assert "x,x,x,x,o,o,x,o,o,positive" in rows
    n_pos = sum(1 for r in rows if r.endswith("positive"))
    assert n_pos == 626, n_pos
    (OUT / "tic-tac-toe.data").write_text("\n".join(rows) + "\n")
    print(f"tic-tac-toe.data: {len(rows)} rows ({n_pos} positive)")


def write_hepatitis():
    rng = random.Random(20240817)
    # (mean, sd, lo, hi) per class for the six numeric attributes.
    numeric = {
        # attr index in the 20-field line -> (die, live) distributions
        1: ((52, 10, 20, 78), (40, 11, 7, 78)),        # age
        14: ((2.8, 1.6, 0.5, 8.0), (1.1, 0.6, 0.3, 4.2)),   # bilirubin
        15: ((130, 50, 40, 295), (100, 40, 26, 280)),  # alk phosphate
        16: ((110, 80, 20, 500), (80, 60, 14, 420)),   # sgot
        17: ((2.9, 0.5, 2.1, 4.2), (4.1, 0.5, 2.7, 6.4)),   # albumin
        18: ((38, 14, 0, 70), (66, 16, 25, 100)),      # protime
    }
    miss_rate = {1: 0.0, 14: 0.04, 15: 0.19, 16: 0.03, 17: 0.10, 18: 0.43}

    def fmt(idx, v):
        if idx == 14:
            return f"{v:.2f}"
        if idx == 17:
            return f"{v:.1f}"
        return str(int(round(v)))

    def draw(idx, cls):
        mean, sd, lo, hi = numeric[idx][0 if cls == 1 else 1]
        v = min(max(rng.gauss(mean, sd), lo), hi)
        return fmt(idx, v)

    rows = []
    for cls in [1] * 32 + [2] * 123:
        fields = ["?"] * 20
        fields[0] = str(cls)
        fields[2] = str(rng.randint(1, 2))  # sex
        for idx in range(3, 14):  # binary symptom attributes
            base = 0.55 if cls == 1 else 0.25
            fields[idx] = "2" if rng.random() < base else "1"
        fields[19] = "2" if rng.random() < (0.8 if cls == 1 else 0.4) else "1"
        for idx in numeric:
            fields[idx] = "?" if rng.random() < miss_rate[idx] else draw(idx, cls)
        rows.append(",".join(fields))

    # Canonical demo case: a live patient with benchmark lab values.
    demo = ["?"] * 20
    demo[0] = "2"
    demo[1] = "34"
    demo[2] = "1"
    for idx in range(3, 14):
        demo[idx] = "1"
    demo[14], demo[15], demo[16], demo[17], demo[18] = "0.90", "95", "28", "4.0", "75"
    demo[19] = "1"
    rows[-1] = ",".join(demo)

    rng.shuffle(rows)
    assert len(rows) == 155
    (OUT / "hepatitis.data").write_text("\n".join(rows) + "\n")
    n_die = sum(1 for r in rows if r.startswith("1,"))
    print(f"hepatitis.data: {len(rows)} rows ({n_die} die)")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    write_iris()
    write_tictactoe()
    write_hepatitis()
