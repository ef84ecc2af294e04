"""Self-consistent synthetic observation series for round-trip fitting tests.

The fitting pipeline estimates rates from first differences and advances
the cumulative grid by e^{r + eta - r^beta}.  A series round-trips exactly
at the generating order when each step satisfies the implicit relation

    h_{m+1} = h_m * exp(r - r^beta_star + (h_{m+1} - h_m))

which this generator solves per step by Newton's method.
"""

import math


def self_consistent_series(M, r, beta_star, n_months):
    d = r - r ** beta_star
    lengths = [M]
    for _ in range(n_months - 1):
        prev = lengths[-1]
        x = prev
        for _ in range(200):
            gx = prev * math.exp(d + x - prev)
            fx = gx - x
            step = fx / (gx - 1.0)
            x -= step
            if abs(step) < 1e-16:
                break
        lengths.append(x)
    return lengths
