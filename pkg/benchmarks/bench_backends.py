"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_backends.py [--repeat 5] [--scenes 64]

Each kernel is run once per backend to warm up (numba compiles on first use),
then timed as the best of ``--repeat`` runs.  Outputs are checked for equality
before anything is printed.
"""

import argparse
import time

import numpy as np

from closedloop import _accel
from closedloop import autodiff as ad
from closedloop import evaluation as ev
from closedloop import model as mdl
from closedloop import scenario as sc
from closedloop.simulator import RolloutConfig, objective, rollout
from closedloop.training import lambda_weights


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def backward_case(scenes):
    mcfg = mdl.ModelConfig()
    tape = ad.Tape()
    tp = mdl.to_tape(mdl.init_params(mcfg, 0), tape)
    tr = rollout(scenes, tp, mcfg, RolloutConfig(h_step=4, wiring="differentiable"), tape=tape)
    root = objective(tr, lambda_weights(tr.n_samples))
    label = f"tape backward ({len(tape):,} nodes)"
    return label, lambda use: tape.backward(root, use_numba=use).copy()


def lane_case(batch, rng):
    n = 20_000
    idx = rng.integers(0, batch.size, size=n)
    t0 = batch.history_len
    pos = batch.target_xy[idx, t0] + rng.normal(scale=3.0, size=(n, 2))
    yaw = batch.target_states[idx, t0, 2] + rng.normal(scale=0.3, size=n)
    return f"lane context ({n:,} queries)", lambda use: np.concatenate(
        batch.lane_context(pos, yaw, idx, use_numba=use), axis=1)


def projection_case(batch, rng):
    laneset = batch.laneset(0)
    pts = batch.target_xy[0, 0] + rng.normal(scale=30.0, size=(20_000, 2))
    return f"lane projection ({len(pts):,} points)", lambda use: np.concatenate(
        laneset.project(pts, use_numba=use)[:2], axis=1)


def collision_case(batch, rng):
    reps = 50
    executed = np.concatenate([batch.target_xy[:, 5:] + rng.normal(scale=2.0, size=(batch.size, 12, 2))
                               for _ in range(reps)])
    yaw = np.tile(batch.target_states[:, 5:, 2], (reps, 1))
    big = sc.SceneBatch(batch.scenes * reps)
    return f"OBB collision ({big.size:,} rollouts)", lambda use: ev.collisions(executed, yaw, big, use_numba=use)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scenes", type=int, default=64)
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    scenes = sc.generate_corpus(0, args.scenes, "dense_intersection")
    batch = sc.SceneBatch(scenes)
    cases = [backward_case(scenes[:8]), lane_case(batch, rng), projection_case(batch, rng), collision_case(batch, rng)]
    print(f"{'kernel':<36} {'numba (s)':>10} {'numpy (s)':>10} {'speedup':>8}")
    for label, fn in cases:
        if not np.array_equal(fn(True), fn(False)):
            raise SystemExit(f"{label}: backends disagree")
        t_nb = best_of(lambda: fn(True), args.repeat)
        t_np = best_of(lambda: fn(False), args.repeat)
        print(f"{label:<36} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
