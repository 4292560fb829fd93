# dirac-sharp - Clifford analysis and sharp L2 inequality verification
