"""Feature structures and unification, step by step.

Run: python3 demos/demo_unification.py
"""

from ltagbench import UnifyFailure, format_term, fs, resolve, unify

print("== merging compatible structures ==")
a = fs("{agr: {num: sg, pers: 3}}")
b = fs("{agr: {num: sg}, case: nom}")
result, env = unify(a, b)
print(f"  {a}  +  {b}")
print(f"  => {format_term(result)}")

print("\n== an atomic clash is a value, not an exception ==")
r = unify(fs("{agr: {num: sg}}"), fs("{agr: {num: pl}}"))
assert isinstance(r, UnifyFailure)
print(f"  failure at path {'.'.join(r.path)}: {r.message()}")

print("\n== variables share values across paths ==")
a = fs("{agr: ?X, subj: {agr: ?X}}")
b = fs("{subj: {agr: {num: sg}}}")
result, env = unify(a, b)
print(f"  {a}  +  {b}")
print(f"  => {format_term(resolve(result, env))}")
print("  the outer agr picked up {num: sg} through the shared variable ?X")

print("\n== bindings accumulate across calls ==")
first, env = unify(fs("{mode: ?M}"), fs("{mode: ind}"))
second = unify(fs("{mode: ?M}"), fs("{mode: imp}"), env)
print("  after binding ?M=ind, unifying {mode: ?M} with {mode: imp}:")
print(f"  {second.message() if isinstance(second, UnifyFailure) else 'unexpected success'}")
