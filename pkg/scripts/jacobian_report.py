"""Compare the symbolic Jacobian determinant of the 4-path behavior map with the published form."""
import random
from fractions import Fraction as F

from wcount import CountingMode
from wcount.paths import jacobian_det_xi, jacobian_det_xi_poly, jacobian_det_xi_published


def main(points: int = 100, seed: int = 0):
    poly = jacobian_det_xi_poly(CountingMode.MATCHING)
    print("symbolic determinant:", poly)
    half = F(1, 2)
    for chi in [(half, 0, 0, half), (half, 0, half, half), (half,) * 4]:
        print(f"chi = {tuple(str(x) for x in chi)}: symbolic {poly(chi)}, "
              f"factored {jacobian_det_xi(chi)}, published {jacobian_det_xi_published(chi)}")
    rng = random.Random(seed)
    agree = pub = 0
    for _ in range(points):
        chi = tuple(F(rng.randint(0, 100), 100) for _ in range(4))
        agree += poly(chi) == jacobian_det_xi(chi)
        pub += poly(chi) == jacobian_det_xi_published(chi)
    print(f"{points} random points: factored form agrees {agree}, published form agrees {pub}")


if __name__ == "__main__":
    main()
