"""Pure-numpy hit-and-run step kernel.

Fallback for threshgen._hitrun when the compiled extension is absent. Both
kernels implement the same contract: advance the walk through one block of
steps, consuming one pre-drawn standard-normal direction and one pre-drawn
uniform per step, writing every visited point to `out` and updating `y`
in place. Keeping the randomness outside the kernel makes the two
implementations interchangeable mid-chain.
"""

import numpy as np


def step_block(rows, rhs, y, normals, uniforms, out):
    """Run len(uniforms) hit-and-run steps inside rows @ y <= rhs.

    For each step the direction is the normalized normal draw; the chord
    through y along that direction is cut by every constraint row, and the
    uniform draw picks the next point on the chord. A numerically empty
    chord (hi < lo) keeps the walk in place rather than stepping outside.
    """
    for step in range(len(uniforms)):
        direction = normals[step]
        norm = np.sqrt(direction @ direction)
        if norm > 0.0:
            unit = direction / norm
            along = rows @ unit
            slack = rhs - rows @ y
            with np.errstate(divide="ignore", invalid="ignore"):
                bounds = slack / along
            hi = np.min(bounds[along > 0.0], initial=np.inf)
            lo = np.max(bounds[along < 0.0], initial=-np.inf)
            # A bounded polytope yields finite chords; the guard keeps a
            # pathological direction from poisoning the walk with inf/nan.
            if np.isfinite(lo) and np.isfinite(hi) and hi >= lo:
                y += (lo + uniforms[step] * (hi - lo)) * unit
        out[step] = y
