"""
coxhecke: exact Coxeter group and generic Hecke algebra engine
"""
