# Unlit mesh program: base color, optionally modulated by an albedo texture.

BINDINGS = ("view_proj", "base_color", "albedo_tex")


def vertex(vin, u):
    world = transform_points(vin["model"], vin["position"])
    return {
        "position": project(u["view_proj"], world),
        "uv": vin["uv"],
    }


def fragment(fin, u):
    uv = fin["uv"]
    color = np.ones((len(uv), 4), dtype=np.float32) * u["base_color"]
    tex = u.get("albedo_tex")
    if tex is not None:
        color = color * tex.sample2d(uv)
    return color
