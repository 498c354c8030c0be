# Four-state transition system with partial transitions.
states x1 x2 x3 x4
inputs u1 u2
obs O1 O2 O3
trans x1 u1 -> {x2, x3}
trans x2 u1 -> {x2, x3}
trans x2 u2 -> {x4}
trans x3 u2 -> {x2, x3}
trans x4 u1 -> {x2, x4}
label x1 = O1
label x2 = O2
label x3 = O3
label x4 = O2
