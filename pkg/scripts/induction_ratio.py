"""Compare each type A zeta_D on U^a with the induced character Ind(xi_D) restricted to U^a."""
import sys

from parasuper.contraction import build_context
from parasuper.rook import canonical_placements_A
from parasuper.superchar import zeta_vs_induction


def main(n=2, p=3):
    ctx = build_context(("A", int(n)), None, int(p))
    for D in canonical_placements_A(ctx.partition):
        r = zeta_vs_induction(ctx, D)
        print(f"{list(D.pairs)}: proportional={r['proportional']} ratio={r['ratio']}")


if __name__ == "__main__":
    main(*sys.argv[1:])
