# How fast does a store-resend eavesdropper get caught?
#
# A single checked round catches the fake qubit with probability
# p*d*(1+y^2)/3, so the chance of surviving a whole n-round sequence
# decays geometrically.  It never hits zero for finite n -- the protocol
# is quasi-secure, not absolutely secure -- but 13 fully-checked rounds
# already push the escape probability below one in a million.

from wshare import IsraParams, isra_case_probs, isra_success_sequence

print("per-round case probabilities at y=1, p=1, d=1:")
caught_z1, caught_z0 = isra_case_probs(y=1.0, p=1.0, d=1.0)
print(f"  caught via home-0 rule: {caught_z0:.4f}")
print(f"  caught via home-1 rule: {caught_z1:.4f}")
print(f"  survives the round:     {1 - caught_z0 - caught_z1:.4f}")

print("\nsequence survival S(n), worst case (y=1, p=1, d=1):")
for n in (1, 2, 5, 10, 13, 20):
    s = isra_success_sequence(IsraParams(y=1.0, p=1.0, d=1.0, n=n))
    bar = "#" * int(round(40 * s))
    print(f"  n={n:3d}  S={s:.2e}  {bar}")

print("\nhalf-hearted checking still wins, just slower (y=0.5, p=0.5, d=0.5):")
for n in (1, 5, 10, 20, 40, 80):
    s = isra_success_sequence(IsraParams(y=0.5, p=0.5, d=0.5, n=n))
    bar = "#" * int(round(40 * s))
    print(f"  n={n:3d}  S={s:.2e}  {bar}")

# The gentler the fake qubit (small y), the slower the decay: y only enters
# through the 1+y^2 factor, so even y=0 is caught at rate p*d/3 per round.
