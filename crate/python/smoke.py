"""Smoke test for the sunitlab extension module.

    pip install --no-build-isolation ./crates/py
    python python/smoke.py
"""

import json

import sunitlab

Q = sunitlab.Field.rationals()
K = sunitlab.Field("x^2 - 2")
phi_field = sunitlab.Field("x^2 - x - 1")

h = sunitlab.height(Q.element("3/2"))
assert h["exact"] == "3", h
assert h["minimal_polynomial"] == "2x - 3", h

r2 = sunitlab.height(K.theta())
assert 1.414213 < r2["value"] < 1.414214, r2

u = K.element("1 + t")
assert (u * K.element("-1 + t")) == K.element("1")
assert (u ** -1) == K.element("-1 + t")
assert u.is_pisot() and not K.theta().is_pisot()

assert sunitlab.is_pisot_poly("x^3 - x - 1") is True
assert sunitlab.is_pisot_poly("x^2 - 2") is False

phi = phi_field.theta()
pp = sunitlab.pseudo_pisot([phi, -(phi ** -1)])
assert pp["verdict"] is True and pp["P"] == [], pp
pp = sunitlab.pseudo_pisot([K.theta()])
assert pp["verdict"] is False and "|β| ≥ 1" in pp["witness"], pp

c = sunitlab.classify_tuple([phi, -(phi ** -1)])
assert c["P1"] and c["P2"] and c["partition"]["h"] == 1, c
c = sunitlab.classify_tuple([K.theta(), -K.theta()])
assert not c["P1"], c

scan = sunitlab.mahler_scan("3/2", "1", 200)
assert scan["qualifying"] == [] and 4 in scan["boundaries"]

config = """
mode = "thm1"
field.minpoly = "-2,0,1"
gamma.gen.1 = "-1"
gamma.order.1 = 2
gamma.gen.2 = "1,1"
alphas.1 = "1"
epsilon = "1/2"
bounds.N = 3
bounds.Qmax = 4
"""
lines = sunitlab.run_config(config, jobs=2).splitlines()
summary = json.loads(lines[-1])
assert summary["kind"] == "summary" and summary["exceptional_set"] == [], summary
assert sunitlab.run_config(config, jobs=1) == sunitlab.run_config(config, jobs=4)

assert all(passed for _, passed, _ in sunitlab.selftest())

print("sunitlab smoke test: ok")
