"""How should a source split its power between relays and the direct link?

Unit-variance Gaussian edges 1->2, 1->3, 1->4, 2->4, 3->4.  The max-min cut
slack at rate zero is the cut-set bound on the source rate.
"""

import numpy as np

from zdcut.infocalc import network_awgn_membership
from zdcut.network import Network, PowerConstraints, load_network

net = load_network(__file__.replace("awgn_power_split.py", "data/awgn_relay.net"))
m = network_awgn_membership(np.zeros(4), net)
print(f"cut-set bound on R1: {m.slack:.4f} bits/slot")
for b in m.bounds:
    print(f"  T={sorted(b.cut)}: {b.bound:.4f}")
print("allocation:")
for (i, j) in zip(*np.nonzero(m.witness)):
    print(f"  S({i + 1},{j + 1}) = {m.witness[i, j]:.3f}")

# shrink the relay budgets and watch the bottleneck move
for relay in (3.0, 1.0, 0.3, 0.1):
    caps = np.array([4.0, relay, relay, 0.0])
    tight = Network(net.n_nodes, net.partition, net.channels, net.demand,
                    PowerConstraints.uniform(4, total=caps.sum(), node=caps))
    r = network_awgn_membership(np.zeros(4), tight)
    print(f"relay power {relay:4.1f}: bound {r.slack:.4f}, tightest cut {sorted(r.cut)}")
