"""Render the circuit and width-curve data written by the berryoptics CLI.

    berryoptics circuit --a 1 --omega-alpha-tau 2 --out out
    berryoptics packet --a 0.5 --b 5 --out out
    python scripts/plot_figures.py out

Needs pandas and matplotlib.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main(out: Path) -> None:
    circuit = out / "circuit.csv"
    if circuit.exists():
        df = pd.read_csv(circuit)
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.plot(df["X[hbar|Delta|]"], df["Y[hbar|Delta|]"], lw=0.8)
        ax.set_xlabel("X / ħ|Δ|")
        ax.set_ylabel("Y / ħ|Δ|")
        ax.set_aspect("equal")
        fig.savefig(out / "circuit.png", dpi=150, bbox_inches="tight")

    widths = out / "widths.csv"
    if widths.exists():
        df = pd.read_csv(widths)
        fig, ax = plt.subplots(figsize=(6, 4))
        t = df["t[t_s]"]
        ax.plot(t, df["width_ground[dx0]"], label="ground (b > 0)")
        ax.plot(t, df["width_excited[dx0]"], label="excited (b < 0)")
        ax.plot(t, df["width_free[dx0]"], "k--", label="free")
        ax.plot(t, df["width_ground_numerical[dx0]"], ".", ms=3, label="ground, numerical")
        ax.set_xlabel("t / t_s")
        ax.set_ylabel("Δx / Δx₀")
        ax.legend()
        fig.savefig(out / "widths.png", dpi=150, bbox_inches="tight")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "berryoptics-out"))
