# P-tree engine package initialization
