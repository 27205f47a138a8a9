#!/usr/bin/env python3
"""Standalone reference evaluation of the 802.11 downlink TCP throughput model.

Independent of the C++ implementation: uses the literal closed forms (no
series rewrite of the attempt probability) and scipy's Brent root finder for
the collision fixed point. Its printed values are frozen into
tests/test_wlan.cpp.
"""
from scipy.optimize import brentq

P = dict(L_TCP=8000.0, L_MAC=272.0, L_IPH=320.0, L_ACK=112.0, L_RTS=180.0, L_CTS=112.0,
         R_data=11e6, R_control=2e6, T_P=144e-6, T_PHY=48e-6, T_DIFS=50e-6,
         T_SIFS=10e-6, T_slot=20e-6, K=7, b0=16.0, p=2.0)


def attempt_prob(pc, b0, K):
    x = 1.0 - 2.0 * pc
    return 2.0 * x / (x * (b0 + 1.0) + pc * b0 * (1.0 - (2.0 * pc) ** K))


def collision_prob(mb):
    if mb == 1.0:
        return 0.0
    f = lambda pc: 1.0 - (1.0 - attempt_prob(pc, P["b0"], P["K"])) ** (mb - 1.0) - pc
    # the literal form is 0/0 at pc = 1/2; bracket on either side of it
    lo, hi = 0.0, 0.4999999
    if f(hi) > 0:
        lo, hi = 0.5000001, 0.999999
    return brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def overhead(mb):
    t_rts = P["T_P"] + P["T_PHY"] + P["L_RTS"] / P["R_control"]
    t_cts = P["T_P"] + P["T_PHY"] + P["L_CTS"] / P["R_control"]
    t_ack = P["T_P"] + P["T_PHY"] + P["L_ACK"] / P["R_control"]
    head = t_rts + P["T_SIFS"] + t_cts + P["T_SIFS"] + P["T_P"] + P["T_PHY"]
    tail = P["T_SIFS"] + t_ack + P["T_DIFS"]
    t_data = head + (P["L_MAC"] + P["L_IPH"] + P["L_TCP"]) / P["R_data"] + tail
    t_tack = head + (P["L_MAC"] + P["L_IPH"]) / P["R_data"] + tail
    pc = collision_prob(mb)
    t_tbo = P["T_slot"] * sum(pc ** i * P["b0"] * P["p"] ** i / 2.0 for i in range(P["K"] + 1))
    t_w = sum(pc ** i for i in range(1, P["K"] + 1)) * (t_rts + P["T_DIFS"])
    return pc, t_tbo, t_w, t_data, t_tack


def theta(mc):
    _, t_tbo, t_w, t_data, t_tack = overhead(1.0 + mc / 2.0)
    return P["L_TCP"] / (mc * (t_data + t_tack + 2 * t_tbo + 2 * t_w))


if __name__ == "__main__":
    pc, tbo, tw, td, ta = overhead(3.0)
    print(f"m_b=3: p_c={pc!r} T_tbo={tbo!r} T_w={tw!r} T_data={td!r} T_ack={ta!r}")
    for mc in range(1, 19):
        print(f"theta({mc}) = {theta(mc)!r}  aggregate = {mc * theta(mc)!r}")
