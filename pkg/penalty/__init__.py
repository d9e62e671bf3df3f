# Penalty module: penalty matrices and node classes
