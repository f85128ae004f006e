int login(const char *user, const char *pass)
{
    if (check_password(user, pass))
        return grant(user);
    return 0;
}
