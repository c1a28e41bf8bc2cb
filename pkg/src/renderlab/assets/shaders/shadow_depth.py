# Depth-only program for the shadow pass, rendered from the light's view.

BINDINGS = ("light_view_proj",)


def vertex(vin, u):
    world = transform_points(vin["model"], vin["position"])
    return {"position": project(u["light_view_proj"], world)}
