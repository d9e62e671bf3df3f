# Selection module: penalty paths and criteria
