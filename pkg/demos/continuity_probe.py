"""Probe a few functions for uniform continuity and gap-p preservation.

x^2 is fine on [0,1] but on the whole line sqrt(n) (whose steps shrink) is
sent to n (whose steps do not).  sin(1/x) breaks near 0; the adversarial
search builds an explicit chain through peak/trough pairs.

    python demos/continuity_probe.py
"""

import numpy as np

from seqlab import Interval, adversarial_witness, catalog_lookup, classify_continuity, parse_function

cases = [
    ("x^2", Interval.closed(0.0, 1.0)),
    ("x^2", Interval.real_line()),
    ("sin(1/x)", Interval.open(0.0, 1.0)),
]
for text, dom in cases:
    rep = classify_continuity(parse_function(text, dom), (1, 2))
    print(f"{text} on {dom}: {rep.summary()}")

sq = parse_function("x^2", Interval.real_line())
s = catalog_lookup("sqrt_n")
print("\nsqrt_n steps :", np.round(np.diff(s.prefix(10**4))[-3:], 6))
print("image steps  :", np.diff(sq.image(s).prefix(10**4))[-3:])

f = parse_function("sin(1/x)", Interval.open(0.0, 1.0))
w, image_verdict = adversarial_witness(f, 1, 1.0)
print("\nfirst chain rows (index, value, image_value):")
print(w.to_csv(8))
print("image verdict:", image_verdict.outcome.value, "at eps", image_verdict.epsilon)
