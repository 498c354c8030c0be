# Autonomous system whose quotient admits an extra output word.
states x1 x2 x3 x4
obs O1 O2 O3
trans x1 -> {x2, x3}
trans x2 -> {x4}
trans x3 -> {x1}
trans x4 -> {x2}
label x1 = O1
label x2 = O1
label x3 = O2
label x4 = O3
