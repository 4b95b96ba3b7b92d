"""Time the numba and numpy kernel flavours side by side.

    python benchmarks/bench_kernels.py [--batch 64] [--size 32] [--repeat 20]

Per-kernel rows call the ``*_nb`` / ``*_np`` functions directly. The last
rows time one full training step (forward, backward, Adam) in a fresh
interpreter under ``ILLUMGAP_NUMBA=1`` and ``ILLUMGAP_NUMBA=0``.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from illumgap import kernels as K
from illumgap.jitter import JitterParams, sample_jitter_draw

STEP_SNIPPET = """
import timeit, numpy as np
from illumgap.tinynet import init_model, loss_and_grad, Adam
m = init_model({size}, 0)
x = np.random.default_rng(0).normal(size=({batch}, {size}, {size}, 3)).astype(np.float32)
y = np.arange({batch}) % 10
opt = Adam(m.params)
def step():
    _, g = loss_and_grad(m, x, y)
    opt.step(m.params, g)
step()
print(min(timeit.repeat(step, number=1, repeat={repeat})))
"""


def best_of(fn, repeat):
    fn()  # warm-up, includes jit compilation
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_cases(batch, size):
    rng = np.random.default_rng(0)
    x3 = rng.random((batch, size, size, 3))
    x8 = rng.normal(size=(batch, size // 2, size // 2, 8)).astype(np.float32)
    a1 = np.maximum(rng.normal(size=(batch, size, size, 8)), 0).astype(np.float32)
    cols = K.im2col3x3_np(x8)
    pooled, idx = K.maxpool2_np(a1)
    dout = rng.normal(size=pooled.shape).astype(np.float32)
    hsv = K.rgb_to_hsv_np(x3)
    p = JitterParams(0.5, 0.5, 0.5, 0.1)
    draws = [sample_jitter_draw(p, rng) for _ in range(batch)]
    amounts = np.array([d.amounts() for d in draws])
    orders = np.array([d.order for d in draws], dtype=np.int64)

    from illumgap.jitter import apply_draw

    def jitter_np():
        return np.stack([apply_draw(im, d) for im, d in zip(x3, draws)])

    return [
        ("im2col3x3", lambda: K.im2col3x3_nb(x8), lambda: K.im2col3x3_np(x8)),
        ("col2im3x3", lambda: K.col2im3x3_nb(cols, 8), lambda: K.col2im3x3_np(cols, 8)),
        ("maxpool2", lambda: K.maxpool2_nb(a1), lambda: K.maxpool2_np(a1)),
        ("maxpool2_backward", lambda: K.maxpool2_backward_nb(dout, idx),
         lambda: K.maxpool2_backward_np(dout, idx)),
        ("rgb_to_hsv", lambda: K.rgb_to_hsv_nb(x3), lambda: K.rgb_to_hsv_np(x3)),
        ("hsv_to_rgb", lambda: K.hsv_to_rgb_nb(hsv), lambda: K.hsv_to_rgb_np(hsv)),
        ("jitter_batch", lambda: K.jitter_batch_nb(x3, amounts, orders), jitter_np),
    ]


def train_step_time(flag, batch, size, repeat):
    env = dict(os.environ, ILLUMGAP_NUMBA=flag)
    code = STEP_SNIPPET.format(batch=batch, size=size, repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=64)
    ap.add_argument("--size", type=int, default=32)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--skip-step", action="store_true", help="skip the full training-step rows")
    args = ap.parse_args(argv)

    print(f"batch {args.batch}, {args.size}x{args.size}, best of {args.repeat}")
    print(f"{'kernel':<20}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for name, nb, npf in kernel_cases(args.batch, args.size):
        t_nb, t_np = best_of(nb, args.repeat), best_of(npf, args.repeat)
        print(f"{name:<20}{t_nb * 1e3:>10.3f}{t_np * 1e3:>10.3f}{t_np / t_nb:>8.1f}x")
    if not args.skip_step:
        t_nb = train_step_time("1", args.batch, args.size, args.repeat)
        t_np = train_step_time("0", args.batch, args.size, args.repeat)
        print(f"{'train step':<20}{t_nb * 1e3:>10.3f}{t_np * 1e3:>10.3f}{t_np / t_nb:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
