# Evaluation module: edge-recovery metrics
