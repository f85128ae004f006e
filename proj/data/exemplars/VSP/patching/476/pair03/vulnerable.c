size_t home_length(void)
{
    const char *home = getenv("HOME");
    size_t n = strlen(home);
    return n;
}
