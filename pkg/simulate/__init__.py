# Simulate module: hub-structured VAR(1) instances
