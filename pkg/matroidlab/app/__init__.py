"""matroidlab application package.

Explicit matroids (basis families over small integer ground sets), group
labelings and forbidden label sets, SI-ordering search, the non-SIBO CNF
encoding and the multi-labelled exchange machinery, wired to a click CLI
under `matroidlab.app.main`.
"""
