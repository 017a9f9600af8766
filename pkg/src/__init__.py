# Fractional Klein-Gordon Solver
