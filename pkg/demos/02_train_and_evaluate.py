# %% [markdown]
# # Train both detectors and combine them
#
# A spectrum detector (logistic regression on enhanced spectra) and a pixel
# baseline (same model on 64x64 luma) are trained on synthetic data. Their
# scores are fused by picking whichever is further from 0.5.

# %%
import numpy as np

from checkerspec import classifier as clf
from checkerspec.enhance import enhance_image
from checkerspec.ensemble import combine_many
from checkerspec.metrics import evaluate
from checkerspec.synthgen import SynthConfig, gen_fake, gen_real


def dataset(seed, n):
    cfg = SynthConfig(seed=seed)
    imgs = [gen_real(cfg, i) for i in range(n)] + [gen_fake(cfg, i) for i in range(n)]
    return imgs, np.array([0] * n + [1] * n)


train_imgs, y_train = dataset(seed=1, n=60)
test_imgs, y_test = dataset(seed=2, n=40)

# %%
spectrum = lambda img: clf.flatten_spectrum(enhance_image(img))
cfg = clf.TrainConfig(epochs=40, learning_rate=0.05, seed=0)

spec_model, history = clf.train_with_history([spectrum(im) for im in train_imgs], y_train, cfg)
pix_model = clf.train([clf.pixel_features(im) for im in train_imgs], y_train, cfg)
print(f"spectrum training loss {history[0]:.4f} -> {history[-1]:.4f}")

# %%
r_f = np.array([clf.score(spec_model, spectrum(im)) for im in test_imgs])
r_i = np.array([clf.score(pix_model, clf.pixel_features(im)) for im in test_imgs])
r = combine_many(r_i, r_f)

for name, scores in [("pixel", r_i), ("spectrum", r_f), ("ensemble", r)]:
    print(f"{name:9s}", evaluate(scores, y_test).format_line())

# %% [markdown]
# Models serialize to a small binary format and reload bit-exactly.

# %%
blob = clf.save_model(spec_model)
assert clf.save_model(clf.load_model(blob)) == blob
print(f"model file is {len(blob)} bytes")
