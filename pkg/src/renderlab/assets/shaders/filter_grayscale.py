# Compute filter: Rec. 709 luma grayscale (Y = 0.2126 R + 0.7152 G + 0.0722 B).

WORKGROUP_SIZE = (8, 8, 1)
BINDINGS = ("src", "dst")


def compute(gid, u):
    src, dst = u["src"], u["dst"]
    x, y = gid[:, 0], gid[:, 1]
    live = (x < src.width) & (y < src.height)
    x, y = x[live], y[live]
    c = src.load(x, y)
    luma = 0.2126 * c[:, 0] + 0.7152 * c[:, 1] + 0.0722 * c[:, 2]
    dst.store(x, y, np.stack([luma, luma, luma, c[:, 3]], axis=1))
