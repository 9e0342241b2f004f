"""Utility models, the money metric, and certainty equivalents.

Run: python3 demos/01_money_metric.py
"""
from bracketlab import (
    Bundle,
    CaraMoneyPowerCost,
    CrraMoney,
    Lottery,
    QuasiLinearPowerCost,
    certainty_equivalent,
    money_metric,
    utility,
)

# A bundle is (tasks to do, dollars received). Utility is increasing in
# money and decreasing in tasks.
model = QuasiLinearPowerCost(alpha=0.004, gamma=2.0)
chore = Bundle(15, 0.0)
paid_chore = Bundle(15, 2.0)
print("quasi-linear, quadratic effort cost")
print(f"  u(15 tasks, $0)  = {utility(model, chore):+.3f}")
print(f"  u(15 tasks, $2)  = {utility(model, paid_chore):+.3f}")

# The money metric M(X) is the payment that makes X exactly as good as
# doing nothing. Negative M means the bundle needs compensation.
print(f"  M(15 tasks, $0)  = {money_metric(model, chore):+.3f}")
print(f"  M(30 tasks, $0)  = {money_metric(model, Bundle(30, 0.0)):+.3f}")
print("  note: M(30) is more than twice M(15); convex costs break additivity")

# Curvature over money shows up in lottery valuations.
coin = Lottery(((Bundle(0, 0.0), 0.5), (Bundle(0, 1.0), 0.5)))
neutral = QuasiLinearPowerCost(alpha=0.004, gamma=1.0)
averse = CaraMoneyPowerCost(rho=1.0, alpha=0.0, gamma=1.0)
print("\n50/50 coin paying $0 or $1")
print(f"  risk-neutral CE   = {certainty_equivalent(neutral, coin, 0.0):.4f}")
print(f"  CARA rho=1 CE     = {certainty_equivalent(averse, coin, 0.0):.4f}")

# CARA is the only curvature where background wealth is irrelevant.
rich, poor = 10.0, 0.0
print(f"  CARA CE at wealth 10 = {certainty_equivalent(averse, coin, rich):.4f} (unchanged)")
crra = CrraMoney(eta=2.0)
positive_coin = Lottery(((Bundle(0, 1.0), 0.5), (Bundle(0, 2.0), 0.5)))
print("\n50/50 coin paying $1 or $2 under CRRA eta=2")
print(f"  CE at wealth  1 = {certainty_equivalent(crra, positive_coin, 1.0):.4f}")
print(f"  CE at wealth 10 = {certainty_equivalent(crra, positive_coin, 10.0):.4f} (risk matters less when rich)")
