"""
Segmenting an inhomogeneous spatio-temporal point process
=========================================================

Arrivals on [0, 7] at a constant overall rate; each arrival gets a spatial
position drawn from a 3-component Gaussian mixture whose weights switch at
times 1, 3 and 4.5. The generated series has columns (time, x, y), rows
sorted by time. The agglomerative estimator runs on the spatial columns
with an initial segmentation cut from equal time windows, and the detected
row boundaries are mapped back to times.

Desk-scaled: rate 200/unit time (~1400 points) instead of 1500 (~10500),
so the demo finishes in seconds.
"""

import numpy as np

from energychange import RandomStream, e_agglo, generate, stpp_scenario

sc = stpp_scenario(rate=200.0)
data, truth = generate(sc, RandomStream(2013))
times, coords = data[:, 0], data[:, 1:]
print(f"{data.shape[0]} arrivals over [0, 7]; true boundary rows {truth}")
print("true change times:", [round(float(times[b - 1]), 3) for b in truth[1:-1]])

# initial segments: equal time windows of 1/4 time unit
member = np.digitize(times, np.arange(0.0, 7.0, 0.25)) - 1

# the unit count penalty is too weak to prune 2-d mixture data, where even
# homogeneous neighboring windows carry a sizable fit contribution; penalties
# are arbitrary callables on the change point vector, so scale it up
for label, penalty in [("neg_count", "neg_count"), ("-10 per cp", lambda cp: -10.0 * len(cp))]:
    res = e_agglo(coords, member, alpha=1.0, penalty=penalty)
    est_times = [round(float(times[b - 1]), 3) for b in res.opt[1:-1]]
    print(f"\npenalty {label}: {len(est_times)} change times")
    print("  estimated:", est_times, "(targets: 1, 3, 4.5)")
