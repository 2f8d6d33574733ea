"""
Three assumption menus and the misspecification-robust bound
============================================================

A menu of assumptions is only worth maintaining while its identified set
is nonempty.  This script runs three synthetic designs through all three
menus and shows how the robust bound automatically falls back: it keeps
the full menu when the data allow it, unions the two one-assumption-weaker
menus when the full menu is refuted, and keeps only the never-refutable
no-exclusion menu when the overlap test fails too.
"""
import numpy as np

import ivbounds as ivb

rng = np.random.default_rng(42)


def describe(name, sample):
    print(f"\n=== {name} ===")
    rb = ivb.robust_bound(sample, grid_points=21)
    d = rb.diagnostics
    print(f"slacks ({d['slack_d0']:.4f}, {d['slack_d1']:.4f}), "
          f"overlap {d['overlap_statistic']:.4f}")
    print("active menus:", [m.code for m in rb.active_menus])
    for key in ("p_df", "theta_0c", "delta_0n"):
        e = rb.entries[key]
        print(f"  {key:9s} {e.kind:10s} [{e.lo:8.4f}, {e.hi:8.4f}]")
    if rb.disconnected:
        print("  disconnected components:", sorted(rb.disconnected))
    return rb


# 1. A clean experiment: everyone complies, exclusion holds.
n = 4000
z = rng.integers(0, 2, n)
d = z.copy()
y = 1.0 * d + rng.normal(size=n)
clean = ivb.Sample(y, d, z)
rb = describe("perfect compliance, exclusion holds", clean)
assert [m.code for m in rb.active_menus] == ["A1"]

# 2. Monotonicity fails (double-hurdle), exclusion still holds.
res = ivb.simulate(ivb.DgpConfig(n=200_000, seed=7, rho=0.0))
rb = describe("double hurdle: monotonicity refuted", res.sample)
assert [m.code for m in rb.active_menus] == ["A2", "A3"]

# 3. A strong direct instrument effect inside a large treated cell: the
#    treated density mass, maximized over arms, integrates beyond one, so
#    even the no-monotonicity menu is refuted.
m = 3000
z = rng.integers(0, 2, m)
d = (rng.random(m) < 0.75).astype(int)  # treatment ignores the instrument
y = rng.normal(size=m) + 5.0 * z        # ...but outcomes do not
direct = ivb.Sample(y, d, z)
rb = describe("direct instrument effect: only monotonicity survives", direct)
assert [m_.code for m_ in rb.active_menus] == ["A3"]

print("\nthe fallback order never leaves the analyst empty-handed: the")
print("no-exclusion menu has no testable implication, so its set always exists")
