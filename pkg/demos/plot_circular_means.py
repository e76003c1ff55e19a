"""
Averaging angles
================

Angles near the 0/360 seam break the ordinary mean. The circular space
averages unit vectors instead and measures error along the shorter arc.
"""
import numpy as np

from krforest import TargetSpace
from krforest.targets import circular_mean, loss, resultant_length

circle = TargetSpace.circular()
deg = np.array([350.0, 355.0, 5.0, 10.0])
angles = np.radians(deg)[:, None]

# the arithmetic mean lands on the wrong side of the circle
print("arithmetic mean:", deg.mean())
print("circular mean:  ", np.degrees(circular_mean(angles)))

# concentration of the sample, 1.0 for identical angles
print("resultant length:", resultant_length(angles))

# the loss is 1 - cos of the angular gap, so 10 and 350 are close
print("loss(10, 350):", loss(circle, np.radians([10.0]), np.radians([350.0])))

# two opposite angles have no mean direction
try:
    circular_mean(np.radians([[0.0], [180.0]]))
except Exception as err:
    print("antipodal pair:", type(err).__name__)
