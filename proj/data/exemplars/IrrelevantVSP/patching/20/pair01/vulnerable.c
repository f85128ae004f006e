int open_profile(const char *name)
{
    char path[256];
    if (name[0] != '\0')
        snprintf(path, sizeof(path), "/var/profiles/%s", name);
    else
        return -1;
    return open(path, O_RDONLY);
}
