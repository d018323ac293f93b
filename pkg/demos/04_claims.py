"""Check every catalog claim, the same thing `qdisent demo` does."""

# %%
from qdisent.report import demo

report = demo()
print(report.to_text())

# %% [markdown]
# The structured form is stable JSON and suitable for diffing.

# %%
print(report.to_json()[:400])
