# Environment-mapped program: reflects the view direction about the surface
# normal and samples the sky cubemap, tinted by the material base color.

BINDINGS = ("view_proj", "camera_pos", "base_color", "sky_cube")


def vertex(vin, u):
    world = transform_points(vin["model"], vin["position"])
    normal = transform_dirs(vin["normal_mat"], vin["normal"])
    return {
        "position": project(u["view_proj"], world),
        "world_pos": world,
        "normal": normal,
    }


def fragment(fin, u):
    n = normalize(fin["normal"])
    incident = normalize(fin["world_pos"] - u["camera_pos"][None, :])
    reflected = reflect(incident, n)
    env = u["sky_cube"].sample_cube(reflected)
    rgb = env[:, :3] * u["base_color"][None, :3]
    alpha = np.ones((len(rgb), 1), dtype=np.float32)
    return np.concatenate([rgb, alpha], axis=1)
