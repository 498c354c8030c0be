# 14-state system with two-successor transitions.
states x1 x2 x3 x4 x5 x6 x7 x8 x9 x10 x11 x12 x13 x14
inputs u1 u2
obs O1 O2 O3 O4 O5
trans x1 u1 -> {x10}
trans x2 u1 -> {x2}
trans x3 u1 -> {x12}
trans x4 u1 -> {x12}
trans x6 u1 -> {x9}
trans x7 u1 -> {x13}
trans x8 u1 -> {x14}
trans x9 u1 -> {x14}
trans x10 u1 -> {x11}
trans x11 u1 -> {x10, x11}
trans x13 u1 -> {x13}
trans x14 u1 -> {x13}
trans x2 u2 -> {x3}
trans x5 u2 -> {x5, x9}
trans x7 u2 -> {x12}
trans x8 u2 -> {x12}
trans x10 u2 -> {x12}
trans x11 u2 -> {x12}
trans x12 u2 -> {x11}
trans x13 u2 -> {x14}
trans x14 u2 -> {x14}
label x1 = O1
label x2 = O1
label x3 = O1
label x4 = O2
label x5 = O2
label x6 = O2
label x7 = O2
label x8 = O2
label x9 = O2
label x10 = O3
label x11 = O3
label x12 = O4
label x13 = O5
label x14 = O5
