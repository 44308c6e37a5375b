"""Castles, castle order zero maps, and the decomposition round trip.

Run with:  python3 demos/07_castles_and_order_zero.py
"""

from fractions import Fraction

from dynalg import (
    Castle,
    CastleOzmData,
    DynSystem,
    FiniteGroup,
    Func,
    RadScalar,
    almost_finiteness_certificate,
    build_castle_ozm,
    decompose_ozm,
    orbit_castle,
    shape_invariance,
    validate_castle,
    verify_cpc,
    verify_normalizer_preserving,
    verify_order_zero,
)


def main():
    z2 = DynSystem.translation(FiniteGroup.cyclic(2))

    # a tower with base {0} and the whole group as shape tiles the space
    castle = Castle(z2, ((frozenset({0}), (0, 1)),))
    print("castle valid:", validate_castle(castle))
    print("shape invariance of the full group:",
          shape_invariance((0, 1), (0, 1), z2))

    data = CastleOzmData.with_trivial_phases(castle, (Func.indicator(z2, {0}),), 2)
    phi = build_castle_ozm(data)
    for i in range(2):
        for j in range(2):
            print("phi(e_%d%d) = %r" % (i, j, phi.images[(i, j)]))
    print("order zero:", verify_order_zero(phi),
          " cpc:", verify_cpc(phi),
          " normalizer preserving:", verify_normalizer_preserving(phi))

    recovered = decompose_ozm(phi)
    print("recovered towers:", recovered.castle.towers)
    print("rebuild equals the map:", build_castle_ozm(recovered) == phi)

    # a twist: weights below one and a phase i on the second leg
    theta = Func.from_dict(z2, {0: RadScalar(0, 1)})
    one = Func.indicator(z2, {0})
    half = Func.from_dict(z2, {0: RadScalar(Fraction(1, 2))})
    twisted = CastleOzmData(castle=castle, weights=(half,), phases=((one, theta),), n=2)
    phi2 = build_castle_ozm(twisted)
    rec2 = decompose_ozm(phi2)
    print("twisted rebuild matches:", build_castle_ozm(rec2) == phi2)

    # almost finiteness at scale (K, delta): the orbit castle always works
    z3 = DynSystem.translation(FiniteGroup.cyclic(3))
    cert = almost_finiteness_certificate(
        z3, K=range(3), delta=Fraction(1, 10),
        castle=orbit_castle(z3), primes=[set()],
    )
    print("orbit castle certificate:", cert.ok,
          "(remainder %s)" % (sorted(cert.remainder) or "empty"))


if __name__ == "__main__":
    main()
