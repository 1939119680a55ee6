"""Rebuild one reference table from the one-dimensional integrals and show the closed forms next to it.

    python demos/table_from_quadrature.py        # table 3, the uniform 3-ball
    python demos/table_from_quadrature.py 6      # half-sphere facet counts
"""
import sys

from betapoly.tables import TABLE_TITLES, TABLES, check_cell, format_terms

table = int(sys.argv[1]) if len(sys.argv) > 1 else 3
print(f"table {table}: {TABLE_TITLES[table]}\n")
print(f"{'cell':<28} {'quadrature':>20} {'rel. error':>10}   closed form")
for cell in TABLES[table]:
    r = check_cell(cell)
    print(f"{cell.name:<28} {r.computed:>20.15f} {r.rel_error:>10.1e}   {format_terms(cell.terms)}")
