# First-triangle program: color derived from uv so each corner gets its own hue.

BINDINGS = ("view_proj",)


def vertex(vin, u):
    world = transform_points(vin["model"], vin["position"])
    return {
        "position": project(u["view_proj"], world),
        "uv": vin["uv"],
    }


def fragment(fin, u):
    uv = fin["uv"]
    r = 1.0 - uv[:, 0:1]
    g = uv[:, 0:1]
    b = 1.0 - uv[:, 1:2]
    a = np.ones_like(r)
    return np.concatenate([r, g, b, a], axis=1)
