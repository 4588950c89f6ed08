# demos/named_codes.py
# Signatures and lambda* of the built-in codes: the Steane ((7,2,3)) code,
# the degenerate ((6,2,3)) stabilizer code, and the permutation-invariant
# ((7,2,3)) code.
import numpy as np

import klscope as kl


def show(name, code, basis):
    violation = kl.kl_violation(code, basis)
    sig = kl.signature_vector(code, basis)
    lam = kl.lambda_star(sig)
    print(f"{name}: n={code.n} K={code.K}")
    print(f"  KL violation     {violation:.3e}")
    print(f"  lambda*          {lam:.12f}   lambda*^2 = {lam**2:.12f}")
    nonzero = [(op.letters, v) for op, v in zip(basis.ops, sig.components)
               if abs(v) > 1e-9]
    if not nonzero:
        print("  signature        all components zero")
    elif len(nonzero) <= 6:
        for word, v in nonzero:
            print(f"  signature        {word} = {v:+.6f}")
    else:
        vals = np.array([v for _, v in nonzero])
        print(f"  signature        {len(nonzero)} nonzero components in "
              f"[{vals.min():+.6f}, {vals.max():+.6f}]")
    we = kl.weight_enumerators(code)
    print(f"  A coefficients   {np.round(we.A, 9)}")
    print(f"  A1 + A2          {kl.lambda_star_sq_from_enumerator(we):.9f}")
    print()


def main():
    basis7 = kl.enumerate_error_basis(7, 3)
    basis6 = kl.enumerate_error_basis(6, 3)

    show("Steane (stabilizer)", kl.codespace_from_stabilizer(kl.builtin("steane")), basis7)
    show("shaw623 (degenerate stabilizer)",
         kl.codespace_from_stabilizer(kl.builtin("shaw623")), basis6)
    show("permutation-invariant plus", kl.perm_code_723("plus"), basis7)
    show("permutation-invariant minus", kl.perm_code_723("minus"), basis7)

    # lambda* is invariant under random local unitaries
    rng = np.random.default_rng(0)
    code = kl.codespace_from_stabilizer(kl.builtin("shaw623"))
    base = kl.lambda_star(kl.signature_vector(code, basis6))
    drift = 0.0
    for _ in range(20):
        factors = []
        for _ in range(6):
            z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
            q, r = np.linalg.qr(z)
            factors.append(q * (np.diag(r) / np.abs(np.diag(r))))
        moved = kl.apply_local_unitary(code, factors)
        lam = kl.lambda_star(kl.signature_vector(moved, basis6, tol=1e-9))
        drift = max(drift, abs(lam - base))
    print(f"lambda* drift over 20 random local-unitary tuples: {drift:.3e}")


if __name__ == "__main__":
    main()
