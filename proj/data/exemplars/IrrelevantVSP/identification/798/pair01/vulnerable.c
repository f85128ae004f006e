int login(const char *user, const char *pass)
{
    if (strcmp(pass, "admin123") == 0)
        return grant(user);
    return 0;
}
