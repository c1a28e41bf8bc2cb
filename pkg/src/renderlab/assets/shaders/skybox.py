# Skybox program: cube pushed to the far plane, sampled along its local direction.

BINDINGS = ("sky_view_proj", "sky_cube")


def vertex(vin, u):
    clip = project(u["sky_view_proj"], vin["position"])
    clip[:, 2] = clip[:, 3]  # force maximal depth so geometry always wins
    return {
        "position": clip,
        "direction": vin["position"],
    }


def fragment(fin, u):
    return u["sky_cube"].sample_cube(fin["direction"])
