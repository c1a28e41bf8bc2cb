# Compute filter: 3x3 box blur with clamp-at-edge sampling.

WORKGROUP_SIZE = (8, 8, 1)
BINDINGS = ("src", "dst")


def compute(gid, u):
    src, dst = u["src"], u["dst"]
    x, y = gid[:, 0], gid[:, 1]
    live = (x < src.width) & (y < src.height)
    x, y = x[live], y[live]
    acc = np.zeros((len(x), 4), dtype=np.float32)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            acc += src.load(x + dx, y + dy)
    dst.store(x, y, acc / 9.0)
