"""
Fisher information and the separation Cramer-Rao bound
======================================================

For an equal pair the quantum Fisher information for the angular
separation is the constant (k*d)^2/4, with no small-separation
penalty.  The fringe measurement reaches that constant exactly at unit
fringe factor and loses ground smoothly as the contrast drops.
"""

import numpy as np

from superres import (Baseline, Scene, classical_fisher_info, qfi_closed_form,
                      qfi_separation)

baseline = Baseline(d1=2.65e-3, d2=-2.65e-3)
scene = Scene(x0=0.0, s=15e-6, z0=1.0, epsilon=0.5, wavelength=848.2e-9)
kd = scene.k * baseline.separation

qfi = qfi_closed_form(scene, baseline)
print(f"closed-form QFI  = {qfi:.6e} 1/rad^2  (= (k*d)^2/4)")

# the numerical route differentiates the two-source state symmetrically
# about its centroid; it should agree and not depend on theta
for s in (2e-6, 15e-6, 50e-6):
    probe = Scene(x0=0.0, s=s, z0=1.0, epsilon=0.5, wavelength=848.2e-9)
    num = qfi_separation(probe, baseline)
    print(f"  numerical at theta={probe.theta:.1e}: {num:.6e} "
          f"(rel dev {num / qfi - 1:+.1e})")

# classical information of the fringe readout: exact saturation at r=1,
# and a hole opening around theta=0 once r < 1
print(f"\n{'theta (rad)':>12} {'CFI r=1.0':>12} {'CFI r=0.975':>12} "
      f"{'ratio':>8}")
for theta in np.geomspace(1e-6, 6e-5, 6):
    perfect = classical_fisher_info(float(theta), 1.0, kd)
    real = classical_fisher_info(float(theta), 0.975, kd)
    print(f"{theta:12.2e} {perfect:12.4e} {real:12.4e} {real / qfi:8.4f}")

n = 60_000
print(f"\nquantum bound on the rmse with n={n} photons: "
      f"{1.0 / np.sqrt(n * qfi):.3e} rad")
