# %% [markdown]
# # F-score and average precision
#
# A prediction is positive when its score is strictly above the threshold.
# AP walks the ranking from the top, taking one precision-recall point per
# distinct score, and sums precision weighted by the recall gained.

# %%
from checkerspec.metrics import average_precision, confusion_at, evaluate, f_score, pr_curve

scores = [0.95, 0.8, 0.8, 0.6, 0.5, 0.3, 0.1]
labels = [1, 1, 0, 1, 0, 0, 1]

print("TP FP TN FN at 0.5:", confusion_at(scores, labels, 0.5))
print("P R F at 0.5:", f_score(scores, labels, 0.5))

# %% [markdown]
# The two items scored 0.8 are consumed together, so shuffling the input
# never changes the curve.

# %%
for r, p in pr_curve(scores, labels):
    print(f"recall {r:.2f}  precision {p:.2f}")
print("AP:", average_precision(scores, labels))

# %%
report = evaluate(scores, labels)
print(report.format_line())
print(report.format_percent())
