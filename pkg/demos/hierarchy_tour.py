"""Walk a few catalog sequences through every mode tester.

    python demos/hierarchy_tour.py
"""

import numpy as np

from seqlab import catalog_lookup, delta, hierarchy_report, repeat_each

for name in ("harmonic_partial", "weighted_harmonic", "alt_sign", "naturals"):
    rep = hierarchy_report(catalog_lookup(name), (1, 2))
    print(f"{name:18s} {rep.summary()}")
    if rep.violations:
        print("  violations:", "; ".join(rep.violations))

# (-1)^n jumps by 2 every step but returns every second step
alt = catalog_lookup("alt_sign")
print("\nΔ_1 alt_sign:", delta(alt, 1).prefix(6))
print("Δ_2 alt_sign:", delta(alt, 2).prefix(6))

# repeating each term p times turns gap-1 differences into gap-p ones
h = catalog_lookup("harmonic_partial")
r = repeat_each(h, 3)
print("\nH_n repeated 3x:", np.round(r.prefix(9), 4))
print("Δ_3 of that    :", np.round(delta(r, 3).prefix(9), 4))
print("Δ_1 H_n        :", np.round(delta(h, 1).prefix(3), 4))
