"""Why cuts matter: the 5-cycle, step by step.

The 5-cycle is the smallest conflict graph where the edge-by-edge view is
blind: every pairwise relaxation allows y = (1/2, ..., 1/2) with value 2.5,
while at most two of the five variables can actually be active at once.
The odd-cycle inequality sum(y) <= 2 removes exactly that fractional point.

Run with:  python3 demos/cut_loop_walkthrough.py
"""
from lpcc_relax import simplex
from lpcc_relax.cuts import (clique_q_cuts, iterate_static_separation,
                             stable_set_cuts)
from lpcc_relax.model import Direction, LpccInstance
from lpcc_relax.graph import singleton_partition
from lpcc_relax.relax import build_cover_relaxation, conflict_graph_of
from lpcc_relax.exact import solve_exact


def main():
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]
    inst = LpccInstance.create(
        direction=Direction.MAX, num_x=0, num_y=5,
        objective_x=(), objective_y=(1.0,) * 5, rows=(), edges=edges)

    g = conflict_graph_of(inst)
    part = singleton_partition(g)
    art = build_cover_relaxation(inst, part)

    res = simplex.solve(art.model)
    print(f"cover relaxation, no cuts:    {res.value:.4f}")
    ys = [res.assignment[f"y[{j}]"] for j in range(1, 6)]
    print(f"  fractional optimum  y = {['%.2f' % v for v in ys]}")

    pool = stable_set_cuts(g, part) + clique_q_cuts(g, part)
    print(f"\nstatic pool: {len(pool)} candidate inequalities")
    run = iterate_static_separation(art, pool)
    print(f"after {run.rounds} separation rounds ({run.added} cuts added): "
          f"{run.result.value:.4f}")

    vstar, _, _ = solve_exact(inst)
    print(f"exact optimum:                {vstar:.4f}")


if __name__ == "__main__":
    main()
