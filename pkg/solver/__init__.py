# Solver module: active-set weighted Lasso
