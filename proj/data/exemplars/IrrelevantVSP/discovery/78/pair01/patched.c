int list_dir(const char *dir)
{
    char cmd[512];
    snprintf(cmd, sizeof(cmd), "ls %s", dir);
    return execlp("ls", "ls", "--", dir, (char *)NULL);
}
