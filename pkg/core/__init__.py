# Core module: time courses and empirical moments
